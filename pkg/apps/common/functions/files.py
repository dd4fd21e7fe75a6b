import json
import os

import pandas as pd


def read_text(path):
    '''
    Reads a text file, trying the common encodings in turn

    Files saved by spreadsheet tools on Windows are often cp1252; the final
    fallback replaces undecodable bytes instead of failing.
    '''
    for enc in ("utf-8", "utf-8-sig", "cp1252", "latin-1"):
        try:
            with open(path, "r", encoding=enc) as f:
                return f.read()
        except UnicodeDecodeError:
            continue
    with open(path, "r", encoding="utf-8", errors="replace") as f:
        return f.read()


def _ensure_parent(path):
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_text(path, text):
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def dumps_json(payload):
    # Key order is kept so identical runs give identical bytes
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=True) + "\n"


def write_json(path, payload):
    return write_text(path, dumps_json(payload))


def write_csv(path, frame: pd.DataFrame):
    '''
    Writes a DataFrame without its index, floats at full precision
    '''
    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path
