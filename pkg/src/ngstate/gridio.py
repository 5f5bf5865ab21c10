"""Plain-text artifact writers: CSV tables and a flat JSON metadata sidecar.

Numbers are rendered with nine significant digits ('%.9g') so repeated
runs produce byte-identical files regardless of thread count or platform
math-library quirks upstream of the rounding.  CSV files carry a single
header row, comma separators, and LF line endings.  Metadata is one flat
JSON object (sorted keys, two-space indent): every resolved configuration
value of a run, enough to reproduce the data from the sidecar alone.
"""

import csv
import json


def format_number(value):
    """Nine-significant-digit text for floats; integers stay exact."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not table values")
    if isinstance(value, int):
        return str(value)
    return format(float(value) + 0.0, ".9g")  # +0.0 folds -0.0 into 0


def write_csv(path, header, rows):
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_number(v) for v in row])


def _rounded(value):
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return float(format_number(value))


def write_json_rows(path, header, rows):
    """The same table as write_csv, as {"header": [...], "rows": [...]}."""
    payload = {"header": list(header),
               "rows": [[_rounded(v) for v in row] for row in rows]}
    with open(path, "w", encoding="ascii", newline="") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def _flat_value(value):
    # sequences become comma-joined strings to keep the object flat
    if isinstance(value, (list, tuple)):
        return ",".join(format_number(v) for v in value)
    if value is None or isinstance(value, (str, bool, int, float)):
        return value
    raise TypeError(f"unsupported metadata value type: {type(value).__name__}")


def write_metadata(path, config):
    flat = {str(k): _flat_value(v) for k, v in config.items()}
    with open(path, "w", encoding="ascii", newline="") as fh:
        json.dump(flat, fh, indent=2, sort_keys=True)
        fh.write("\n")
