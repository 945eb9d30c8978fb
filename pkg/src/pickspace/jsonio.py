"""JSON plumbing: complex numbers travel as ``[re, im]`` pairs."""

from __future__ import annotations

import json

import numpy as np

__all__ = ["encode_complex", "encode_array", "decode_array", "load_json", "dumps"]


def encode_complex(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_array(a):
    """Nested lists of ``[re, im]`` mirroring the array shape."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        return encode_complex(arr)
    return [encode_array(x) for x in arr]


def _is_pair(x):
    return (isinstance(x, (list, tuple)) and len(x) == 2
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in x))


def _decode(x):
    if _is_pair(x):
        return complex(x[0], x[1])
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    return [_decode(c) for c in x]


def decode_array(data, ndim: int | None = None) -> np.ndarray:
    """Inverse of :func:`encode_array`; plain numbers and strings also accepted.

    A length-2 list of numbers is ambiguous; it is read as one complex
    number.  Pass ``ndim`` to force the expected rank (a trailing pair
    axis of real numbers is then reinterpreted when needed).
    """
    arr = np.asarray(_decode(data), dtype=complex)
    if ndim is not None and arr.ndim != ndim:
        raw = np.asarray(data, dtype=float)
        if raw.ndim == ndim:
            arr = raw.astype(complex)
        elif raw.ndim == ndim + 1 and raw.shape[-1] == 2:
            arr = raw[..., 0] + 1j * raw[..., 1]
        else:
            raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    return arr


def load_json(path):
    """Read a JSON file; syntax errors carry the line and column."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return encode_array(o)
    if isinstance(o, complex):
        return encode_complex(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"
