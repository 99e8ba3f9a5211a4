"""Minimal reader for R .rda/.RData files (XDR serialization v2/v3).

Covers exactly what dataset extraction needs: pairlists, generic vectors,
numeric/integer/logical/character vectors, factors, attributes, references,
and the ALTREP wrappers R >= 3.5 emits for compact sequences and wrapped
vectors. Returns plain Python/numpy objects; data.frames become
``{"__columns__": [...], column_name: array_or_list, ...}``.

Only a development utility for tools/fetch_datasets.py; not part of the
installed package.
"""

from __future__ import annotations

import bz2
import gzip
import lzma
import struct

import numpy as np

NILVALUE = 254
REF = 255
SYM = 1
LISTSXP = 2
CHAR = 9
LGL = 10
INT = 13
REAL = 14
CPLX = 15
STR = 16
VEC = 19
EXPR = 20
RAW = 24
S4 = 25
ALTREP = 238
EMPTYENV = 242
BASEENV = 241
GLOBALENV = 253
MISSINGARG = 251
UNBOUND = 252

INT_NA = -2147483648


class _Reader:
    def __init__(self, payload: bytes):
        self.buf = payload
        self.pos = 0
        self.refs = []

    def _take(self, n: int) -> bytes:
        chunk = self.buf[self.pos:self.pos + n]
        if len(chunk) != n:
            raise ValueError("truncated RData stream")
        self.pos += n
        return chunk

    def u32(self) -> int:
        return struct.unpack(">I", self._take(4))[0]

    def i32(self) -> int:
        return struct.unpack(">i", self._take(4))[0]

    def f64s(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(8 * count), dtype=">f8").astype(np.float64)

    def i32s(self, count: int) -> np.ndarray:
        return np.frombuffer(self._take(4 * count), dtype=">i4").astype(np.int64)

    def read_header(self):
        magic = self._take(2)
        if magic != b"X\n":
            raise ValueError(f"only XDR serialization supported, got {magic!r}")
        version = self.i32()
        self.i32()  # writer version
        self.i32()  # minimal reader version
        if version >= 3:
            enc_len = self.i32()
            self._take(enc_len)
        return version

    def read_item(self):
        flags = self.u32()
        sexp_type = flags & 255
        has_attr = bool(flags & 0x200)
        has_tag = bool(flags & 0x400)

        if sexp_type == NILVALUE:
            return None
        if sexp_type == REF:
            index = flags >> 8
            if index == 0:
                index = self.i32()
            return self.refs[index - 1]
        if sexp_type == SYM:
            name = self.read_item()
            self.refs.append(name)
            return name
        if sexp_type in (EMPTYENV, BASEENV, GLOBALENV, MISSINGARG, UNBOUND):
            return None
        if sexp_type == CHAR:
            length = self.i32()
            if length == -1:
                return None
            return self._take(length).decode("utf-8", errors="replace")
        if sexp_type == LISTSXP:
            attrs = self.read_item() if has_attr else None
            tag = self.read_item() if has_tag else None
            car = self.read_item()
            cdr = self.read_item()
            pairs = [(tag, car)]
            if isinstance(cdr, list):
                pairs.extend(cdr)
            elif cdr is not None:
                pairs.append((None, cdr))
            del attrs
            return pairs
        if sexp_type == ALTREP:
            info = self.read_item()
            state = self.read_item()
            self.read_item()  # attributes slot of the wrapper
            return self._decode_altrep(info, state)
        if sexp_type == LGL:
            length = self.i32()
            raw = self.i32s(length)
            values = np.where(raw == INT_NA, np.nan, raw.astype(np.float64))
            return self._with_attrs(values, has_attr)
        if sexp_type == INT:
            length = self.i32()
            raw = self.i32s(length)
            return self._with_attrs(raw, has_attr)
        if sexp_type == REAL:
            length = self.i32()
            return self._with_attrs(self.f64s(length), has_attr)
        if sexp_type == CPLX:
            length = self.i32()
            raw = self.f64s(2 * length)
            return self._with_attrs(raw[0::2] + 1j * raw[1::2], has_attr)
        if sexp_type == STR:
            length = self.i32()
            values = [self.read_item() for _ in range(length)]
            return self._with_attrs(values, has_attr)
        if sexp_type in (VEC, EXPR):
            length = self.i32()
            values = [self.read_item() for _ in range(length)]
            return self._with_attrs(values, has_attr)
        if sexp_type == RAW:
            length = self.i32()
            return self._with_attrs(np.frombuffer(self._take(length), dtype=np.uint8), has_attr)
        if sexp_type == S4:
            attrs = self.read_item()
            return {"__s4__": attrs}
        raise ValueError(f"unhandled SEXP type {sexp_type} at offset {self.pos}")

    def _with_attrs(self, value, has_attr: bool):
        if not has_attr:
            return value
        attrs = self.read_item()
        return _Attributed(value, _pairs_to_dict(attrs))

    def _decode_altrep(self, info, state):
        class_name = None
        if isinstance(info, list) and info and info[0][1] is not None:
            # info is a pairlist whose CAR is the class symbol
            head = info[0][1]
            if isinstance(head, str):
                class_name = head
            elif isinstance(head, list) and head:
                class_name = head[0][1]
        if class_name == "compact_intseq":
            n, start, step = np.asarray(_strip(state), dtype=np.float64)
            return (start + step * np.arange(int(n))).astype(np.int64)
        if class_name == "compact_realseq":
            n, start, step = np.asarray(_strip(state), dtype=np.float64)
            return start + step * np.arange(int(n))
        # wrap_* and deferred_string carry the materialized payload inside state
        return _first_vector(state)


class _Attributed:
    def __init__(self, value, attrs):
        self.value = value
        self.attrs = attrs


def _strip(obj):
    return obj.value if isinstance(obj, _Attributed) else obj


def _pairs_to_dict(pairs):
    out = {}
    if isinstance(pairs, list):
        for tag, value in pairs:
            if tag is not None:
                out[tag] = value
    return out


def _first_vector(obj):
    obj = _strip(obj)
    if isinstance(obj, np.ndarray):
        return obj
    if isinstance(obj, list):
        if obj and all(isinstance(v, str) or v is None for v in obj):
            return obj
        for item in obj:
            value = item[1] if isinstance(item, tuple) else item
            found = _first_vector(value)
            if found is not None:
                return found
    return None


def _finalize(obj):
    """Resolve factors and data.frames into plain structures."""
    if isinstance(obj, _Attributed):
        attrs = {k: _finalize(v) for k, v in obj.attrs.items()}
        value = _finalize(obj.value)
        classes = attrs.get("class") or []
        if "factor" in classes:
            levels = attrs.get("levels") or []
            codes = np.asarray(value)
            labels = []
            for code in codes:
                labels.append(None if code == INT_NA else levels[int(code) - 1])
            return FactorColumn(codes, levels, labels)
        if "data.frame" in classes:
            names = attrs.get("names") or []
            frame = {"__columns__": list(names)}
            for name, column in zip(names, value):
                frame[name] = column
            return frame
        if attrs.get("names") and isinstance(value, list):
            named = {"__columns__": list(attrs["names"])}
            for name, item in zip(attrs["names"], value):
                named[name] = item
            return named
        return value
    if isinstance(obj, list) and obj and isinstance(obj[0], tuple):
        return {tag: _finalize(val) for tag, val in obj if tag is not None}
    if isinstance(obj, list):
        return [_finalize(v) for v in obj]
    return obj


class FactorColumn:
    def __init__(self, codes, levels, labels):
        self.codes = codes  # 1-based, INT_NA for missing
        self.levels = levels
        self.labels = labels

    def numeric_codes(self) -> np.ndarray:
        """1-based level codes as floats with NaN for missing."""
        out = self.codes.astype(np.float64)
        out[self.codes == INT_NA] = np.nan
        return out


def load_rda(path: str) -> dict:
    with open(path, "rb") as fh:
        head = fh.read(6)
        fh.seek(0)
        if head.startswith(b"\x1f\x8b"):
            raw = gzip.open(fh).read()
        elif head.startswith(b"BZh"):
            raw = bz2.open(fh).read()
        elif head.startswith(b"\xfd7zXZ"):
            raw = lzma.open(fh).read()
        else:
            raw = fh.read()
    if not raw.startswith((b"RDX2\n", b"RDX3\n")):
        raise ValueError(f"{path}: not an RData file")
    reader = _Reader(raw[5:])
    reader.read_header()
    top = reader.read_item()
    return _finalize(top)
