"""JSON encoding and decoding for every document type the CLI consumes.

Scalar convention: a complex number is a two-element list [re, im].  Exact
values carry their parts as fraction strings ("3/7", "-2"); floating values
carry JSON numbers.  A bare number or string is accepted on input as a real
scalar.  A document is decoded exactly when every scalar leaf in it is a
string or an integer; one floating leaf switches the whole document to
floating arithmetic, so mixed documents stay well typed.

Document shapes:

* polynomial: [{"exps": [int; d], "re": ..., "im": ...}], terms sorted by
  exponent for deterministic output.
* series: {"d", "center": [scalar; d], "K", "terms": [...]} plus an optional
  "valid" when the series is trustworthy only below the ring order.
* series matrix: {"d", "n", "center", "K", "entries": [[terms]]} plus an
  optional "valids" grid.
* matrix family: {"d", "n", "entries": [[polynomial]],
  "branches": [{"poly", "multiplicity"}]} with branches optional.
* flat-system problem: {"d", "n", "x0": [scalar], "f": [polynomial; n],
  "b": [scalar; n], "F0": [[scalar]]} with F0 optional.
* framed connection: {"d", "n", "center", "K", "Delta0": [polynomial; n],
  "Bdiag": [scalar; n], "L": [[terms]]} with L the off-diagonal entry grid.
* gauge series: {"K", "F": [series matrix]}.
* path: [polynomial; d] in one parameter.
"""

from __future__ import annotations

from fractions import Fraction

from .darboux import DEJet, DEProblem
from .errors import ShapeError, ValidationError
from .families import MatrixFamily
from .gauge import FramedConnection, GaugeSeries, build_connection
from .polynomials import Poly
from .scalars import ComplexRational, is_exact_scalar, to_complex
from .series import SeriesMatrix, SeriesRing, TruncatedSeries


# -- scalars -------------------------------------------------------------------


def _encode_part(v, exact: bool):
    return str(Fraction(v)) if exact else float(v)


def encode_scalar(v) -> list:
    if isinstance(v, ComplexRational):
        return [_encode_part(v.re, True), _encode_part(v.im, True)]
    if isinstance(v, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(v, (int, Fraction)):
        return [_encode_part(v, True), "0"]
    c = complex(v)
    return [c.real, c.imag]


def _decode_part(v):
    """One scalar part; returns (value, is_exact)."""
    if isinstance(v, bool):
        raise ValidationError("booleans are not scalar parts")
    if isinstance(v, str):
        try:
            return Fraction(v), True
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad fraction string {v!r}") from exc
    if isinstance(v, int):
        return Fraction(v), True
    if isinstance(v, float):
        return v, False
    raise ValidationError(f"bad scalar part {v!r}")


def decode_scalar(obj):
    """[re, im] pair, or a bare number or fraction string."""
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValidationError("complex scalar must be a [re, im] pair")
        re, re_exact = _decode_part(obj[0])
        im, im_exact = _decode_part(obj[1])
        if re_exact and im_exact:
            return ComplexRational(re, im)
        return complex(re, im)
    re, re_exact = _decode_part(obj)
    return ComplexRational(re) if re_exact else complex(re, 0.0)


def _leaf_floats(obj) -> bool:
    if isinstance(obj, float):
        return True
    if isinstance(obj, (list, tuple)):
        return any(_leaf_floats(v) for v in obj)
    if isinstance(obj, dict):
        return any(_leaf_floats(v) for v in obj.values())
    return False


def document_is_exact(obj) -> bool:
    """True when no scalar leaf anywhere in the document is a JSON float."""
    return not _leaf_floats(obj)


def _as_mode(v, exact: bool):
    if exact:
        return v
    return to_complex(v)


# -- polynomials ----------------------------------------------------------------


def encode_poly(p: Poly) -> list:
    out = []
    for exps in sorted(p.coeffs):
        pair = encode_scalar(p.coeffs[exps])
        out.append({"exps": list(exps), "re": pair[0], "im": pair[1]})
    return out


def _decode_terms(obj, d: int, exact: bool) -> dict:
    coeffs = {}
    for term in obj:
        if not isinstance(term, dict) or "exps" not in term:
            raise ValidationError("each term needs an exps list")
        exps = tuple(int(e) for e in term["exps"])
        if len(exps) != d:
            raise ShapeError(f"term exponents {exps} do not match d={d}")
        c = decode_scalar([term.get("re", 0), term.get("im", 0)])
        coeffs[exps] = _as_mode(c, exact)
    return coeffs


def decode_poly(obj, d: int, exact: bool | None = None) -> Poly:
    if exact is None:
        exact = document_is_exact(obj)
    return Poly(d, _decode_terms(obj, d, exact), exact)


# -- truncated series and matrices ----------------------------------------------


def _encode_series_terms(s: TruncatedSeries) -> list:
    out = []
    for exps in sorted(s.coeffs):
        if sum(exps) > s.valid:
            continue
        pair = encode_scalar(s.coeffs[exps])
        out.append({"exps": list(exps), "re": pair[0], "im": pair[1]})
    return out


def encode_series(s: TruncatedSeries) -> dict:
    ring = s.ring
    out = {
        "d": ring.d,
        "center": [encode_scalar(c) for c in ring.center],
        "K": ring.K,
        "terms": _encode_series_terms(s),
    }
    if s.valid != ring.K:
        out["valid"] = s.valid
    return out


def _ring_from_doc(obj, exact: bool) -> SeriesRing:
    d = int(obj["d"])
    center = [_as_mode(decode_scalar(c), exact) for c in obj["center"]]
    if len(center) != d:
        raise ShapeError("center length must equal d")
    return SeriesRing(d, int(obj["K"]), center, exact)


def decode_series(obj, ring: SeriesRing | None = None) -> TruncatedSeries:
    exact = document_is_exact(obj) if ring is None else ring.exact
    if ring is None:
        ring = _ring_from_doc(obj, exact)
    coeffs = _decode_terms(obj["terms"], ring.d, ring.exact)
    valid = int(obj.get("valid", ring.K))
    return TruncatedSeries(ring, coeffs, valid)


def encode_series_matrix(m: SeriesMatrix) -> dict:
    ring = m.ring
    n, ncols = m.shape
    out = {
        "d": ring.d,
        "n": n,
        "center": [encode_scalar(c) for c in ring.center],
        "K": ring.K,
        "entries": [[_encode_series_terms(m.entry(i, j)) for j in range(ncols)] for i in range(n)],
    }
    valids = [[m.entry(i, j).valid for j in range(ncols)] for i in range(n)]
    if any(v != ring.K for row in valids for v in row):
        out["valids"] = valids
    return out


def decode_series_matrix(obj, ring: SeriesRing | None = None) -> SeriesMatrix:
    exact = document_is_exact(obj) if ring is None else ring.exact
    if ring is None:
        ring = _ring_from_doc(obj, exact)
    entries = obj["entries"]
    n = int(obj.get("n", len(entries)))
    if len(entries) != n:
        raise ShapeError("entry grid does not match n")
    valids = obj.get("valids")
    rows = []
    for i, row in enumerate(entries):
        if len(row) != len(entries[0]):
            raise ShapeError("entry grid must be rectangular")
        out_row = []
        for j, terms in enumerate(row):
            valid = int(valids[i][j]) if valids is not None else ring.K
            out_row.append(TruncatedSeries(ring, _decode_terms(terms, ring.d, ring.exact), valid))
        rows.append(out_row)
    return SeriesMatrix(rows)


# -- constant matrices -----------------------------------------------------------


def encode_const_matrix(m) -> list:
    return [[encode_scalar(v) for v in row] for row in m]


def decode_const_matrix(obj, exact: bool | None = None) -> list:
    if exact is None:
        exact = document_is_exact(obj)
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ValidationError("matrix must be a list of rows")
    return [[_as_mode(decode_scalar(v), exact) for v in row] for row in obj]


# -- matrix families --------------------------------------------------------------


def encode_matrix_family(fam: MatrixFamily) -> dict:
    out = {
        "d": fam.d,
        "n": fam.n,
        "entries": [[encode_poly(p) for p in row] for row in fam.entries],
    }
    if fam.branches is not None:
        out["branches"] = [
            {"poly": encode_poly(p), "multiplicity": m} for p, m in fam.branches
        ]
    return out


def decode_matrix_family(obj, validate: bool = True) -> MatrixFamily:
    exact = document_is_exact(obj)
    d, n = int(obj["d"]), int(obj["n"])
    entries = [[decode_poly(t, d, exact) for t in row] for row in obj["entries"]]
    branches = None
    if obj.get("branches") is not None:
        branches = [
            (decode_poly(b["poly"], d, exact), int(b["multiplicity"]))
            for b in obj["branches"]
        ]
    return MatrixFamily(d, n, entries, branches, validate=validate)


# -- flat-system problems ----------------------------------------------------------


def encode_de_problem(problem: DEProblem, F0=None) -> dict:
    out = {
        "d": problem.d,
        "n": problem.n,
        "x0": [encode_scalar(c) for c in problem.x0],
        "f": [
            encode_poly(p if isinstance(p, Poly) else _series_to_absolute_poly(p))
            for p in problem.f
        ],
        "b": [encode_scalar(c) for c in problem.b],
    }
    if F0 is not None:
        out["F0"] = encode_const_matrix(F0)
    return out


def decode_de_problem(obj, tol: float = 1e-10):
    """Returns (problem, F0) with F0 None when the document has none."""
    exact = document_is_exact(obj)
    d, n = int(obj["d"]), int(obj["n"])
    x0 = [_as_mode(decode_scalar(c), exact) for c in obj["x0"]]
    f = [decode_poly(t, d, exact) for t in obj["f"]]
    b = [_as_mode(decode_scalar(c), exact) for c in obj["b"]]
    problem = DEProblem(d, n, x0, f, b, tol=tol)
    f0 = None
    if obj.get("F0") is not None:
        f0 = decode_const_matrix(obj["F0"], exact)
    return problem, f0


def encode_jet(jet: DEJet) -> dict:
    return encode_series_matrix(jet.F)


def decode_jet(obj) -> DEJet:
    return DEJet(decode_series_matrix(obj))


# -- framed connections -------------------------------------------------------------


def encode_framed_connection(conn: FramedConnection) -> dict:
    ring = conn.ring
    n = conn.n
    return {
        "d": ring.d,
        "n": n,
        "center": [encode_scalar(c) for c in ring.center],
        "K": ring.K,
        "Delta0": [encode_poly(_series_to_absolute_poly(conn.f[i])) for i in range(n)],
        "Bdiag": [encode_scalar(c) for c in conn.b],
        "L": encode_series_matrix(conn.L)["entries"],
    }


def _series_to_absolute_poly(s: TruncatedSeries) -> Poly:
    """Expand a centered series into a polynomial in the absolute variables."""
    ring = s.ring
    shifts = [
        Poly.variable(ring.d, a, ring.exact) - Poly.constant(ring.d, ring.center[a], ring.exact)
        for a in range(ring.d)
    ]
    out = Poly(ring.d, None, ring.exact)
    for exps, c in s.coeffs.items():
        if sum(exps) > s.valid:
            continue
        term = Poly.constant(ring.d, c, ring.exact)
        for a, e in enumerate(exps):
            for _ in range(e):
                term = term * shifts[a]
        out = out + term
    return out


def decode_framed_connection(obj, tol: float = 1e-10) -> FramedConnection:
    exact = document_is_exact(obj)
    d, n = int(obj["d"]), int(obj["n"])
    ring = SeriesRing(d, int(obj["K"]),
                      [_as_mode(decode_scalar(c), exact) for c in obj["center"]], exact)
    fpolys = [decode_poly(t, d, exact) for t in obj["Delta0"]]
    if len(fpolys) != n:
        raise ShapeError("Delta0 must list one diagonal polynomial per row")
    zero = ring.zero()
    delta0 = ring.matrix(
        [[ring.from_poly(fpolys[i]) if i == j else zero for j in range(n)] for i in range(n)]
    )
    bdiag = [_as_mode(decode_scalar(c), exact) for c in obj["Bdiag"]]
    lmat = decode_series_matrix({"d": d, "n": n, "center": obj["center"], "K": obj["K"],
                                 "entries": obj["L"]}, ring)
    return build_connection(delta0, bdiag, lmat, tol=tol)


# -- gauge series ----------------------------------------------------------------------


def encode_gauge_series(gs: GaugeSeries) -> dict:
    return {"K": gs.K, "F": [encode_series_matrix(fk) for fk in gs.F]}


def decode_gauge_series(obj) -> GaugeSeries:
    mats = [decode_series_matrix(m) for m in obj["F"]]
    if len(mats) != int(obj.get("K", len(mats))):
        raise ValidationError("gauge series K does not match the number of terms")
    return GaugeSeries(mats)


# -- paths -----------------------------------------------------------------------------


def encode_path(curves) -> list:
    return [encode_poly(p) for p in curves]


def decode_path(obj, d: int | None = None) -> list:
    exact = document_is_exact(obj)
    curves = [decode_poly(t, 1, exact) for t in obj]
    if d is not None and len(curves) != d:
        raise ShapeError(f"path must have {d} coordinate curves")
    return curves
