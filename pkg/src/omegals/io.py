"""File formats: Matrix Market matrices, subspace JSON, CSV emission.

Matrix Market covers both the dense "array" and sparse "coordinate" layouts,
real and complex, written with enough digits (17 after the point) that
float64 values survive a decimal round trip. Subspaces serialize to JSON as
``{n, k, basis}`` with the basis stored column-major as [re, im] pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

# %.17e gives 18 significant digits: enough to round-trip any float64.
MM_PRECISION = 17


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (CLI/CSV contract)."""
    return f"{x:.17g}"


def _empty_mm_text(m: np.ndarray) -> str:
    field = "complex" if np.iscomplexobj(m) else "real"
    return f"%%MatrixMarket matrix array {field} general\n%\n{m.shape[0]} {m.shape[1]}\n"


def _parse_empty_mm(text: str) -> np.ndarray | None:
    """Header-only fast path for zero-size array payloads (the scipy reader
    and writer both spin on matrices with a zero dimension)."""
    lines = text.splitlines()
    if not lines or "array" not in lines[0]:
        return None
    body = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("%")]
    if not body:
        return None
    rows, cols = (int(tok) for tok in body[0].split()[:2])
    if rows * cols != 0:
        return None
    dtype = complex if "complex" in lines[0] else float
    return np.zeros((rows, cols), dtype=dtype)


def write_matrix_market(path, m: np.ndarray, fmt: str = "array", comment: str = "") -> None:
    """Write a dense matrix (or column vector) in Matrix Market format.

    fmt "array" stores the dense layout, "coordinate" the sparse triplet one;
    either round-trips float64 entries exactly in decimal. Zero-size matrices
    are written as header-only array files.
    """
    m = np.asarray(m)
    if m.ndim == 1:
        m = m[:, None]
    if m.size == 0:
        Path(path).write_text(_empty_mm_text(m))
        return
    if fmt == "array":
        payload = m
    elif fmt == "coordinate":
        payload = scipy.sparse.coo_matrix(m)
    else:
        raise ValueError(f"unknown Matrix Market format {fmt!r}")
    scipy.io.mmwrite(str(path), payload, comment=comment, precision=MM_PRECISION)


def read_matrix_market(path) -> np.ndarray:
    """Read a Matrix Market file into a dense ndarray."""
    empty = _parse_empty_mm(Path(path).read_text())
    if empty is not None:
        return empty
    m = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return np.asarray(m)


def read_vector_market(path) -> np.ndarray:
    """Read an n x 1 (or 1 x n) Matrix Market file as a flat vector."""
    m = read_matrix_market(path)
    if m.ndim == 2 and 1 in m.shape:
        return m.reshape(-1)
    if m.ndim == 1:
        return m
    raise ValueError(f"expected a vector, got shape {m.shape}")


def subspace_to_json(basis: np.ndarray) -> dict:
    """JSON object {n, k, basis: column-major [re, im] pairs} for a basis."""
    n, k = basis.shape
    flat = np.asarray(basis, dtype=complex).flatten(order="F")
    return {"n": int(n), "k": int(k), "basis": [[float(z.real), float(z.imag)] for z in flat]}


def subspace_from_json(obj: dict) -> np.ndarray:
    n, k = int(obj["n"]), int(obj["k"])
    pairs = obj["basis"]
    if len(pairs) != n * k:
        raise ValueError("basis length does not match n*k")
    flat = np.array([complex(re, im) for re, im in pairs])
    basis = flat.reshape((n, k), order="F")
    if np.all(basis.imag == 0.0):
        basis = basis.real
    return basis


def save_subspace(path, basis: np.ndarray) -> None:
    Path(path).write_text(json.dumps(subspace_to_json(basis)))


def load_subspace(path) -> np.ndarray:
    return subspace_from_json(json.loads(Path(path).read_text()))


def _mm_string(m: np.ndarray) -> str:
    import io as _io

    m = np.asarray(m)
    if m.ndim != 2:
        m = m[:, None]
    if m.size == 0:
        return _empty_mm_text(m)
    buf = _io.BytesIO()
    scipy.io.mmwrite(buf, m, precision=MM_PRECISION)
    return buf.getvalue().decode()


def _mm_parse(text: str) -> np.ndarray:
    import io as _io

    empty = _parse_empty_mm(text)
    if empty is not None:
        return empty
    m = scipy.io.mmread(_io.BytesIO(text.encode()))
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return np.asarray(m)


def decomposition_to_json(dec) -> dict:
    """Block shapes plus Matrix Market payloads for every stored block."""
    blocks = {name: getattr(dec, name) for name in ("V", "Vp", "Vpp", "T", "B", "C", "D", "E")}
    return {
        "n": dec.n,
        "p": dec.p,
        "q": dec.q,
        "lambda_min": dec.lambda_min,
        "shapes": {name: list(block.shape) for name, block in blocks.items()},
        "blocks": {name: _mm_string(block) for name, block in blocks.items()},
    }


def decomposition_blocks_from_json(obj: dict) -> dict:
    """Parse the Matrix Market payloads back into ndarrays (keyed by block)."""
    out = {}
    for name, text in obj["blocks"].items():
        block = _mm_parse(text)
        rows, cols = obj["shapes"][name]
        out[name] = block.reshape((rows, cols)) if block.size else np.zeros((rows, cols))
    return out


def _complex_pairs(m: np.ndarray) -> list:
    flat = np.asarray(m, dtype=complex).flatten(order="F")
    return [[float(z.real), float(z.imag)] for z in flat]


def condition_report_to_json(report) -> dict:
    """JSON object for a sufficient-condition report; sampled coupling
    matrices are stored column-major as [re, im] pairs."""
    return {
        "t_invertible": bool(report.t_invertible),
        "images_trivial_intersection": bool(report.images_trivial_intersection),
        "samples": [
            {
                "omega": float(s.omega),
                "mu": float(s.mu),
                "invertible": bool(s.invertible),
                "positive": bool(s.positive),
                "l_matrix": {
                    "rows": int(s.l_matrix.shape[0]),
                    "cols": int(s.l_matrix.shape[1]),
                    "entries": _complex_pairs(s.l_matrix),
                },
            }
            for s in report.samples
        ],
    }


def save_condition_report(path, report) -> None:
    Path(path).write_text(json.dumps(condition_report_to_json(report), indent=2))


def write_csv(path, header: list[str], rows) -> None:
    """Write rows of floats (or ints) with 17-significant-digit formatting."""
    lines = [",".join(header)]
    for row in rows:
        cells = [str(c) if isinstance(c, (int, np.integer)) else format_float(float(c)) for c in row]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")
