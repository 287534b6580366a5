"""Holomorphic matrix families and the Jordanizability checker.

A family is an n x n matrix of polynomials in d variables, optionally
with declared eigenvalue branches (polynomial, multiplicity).  The
checker probes three conditions at a point:

  1. a holomorphic Jordan form exists: each branch's Segre symbol is
     constant off the coalescence locus, and at the center the Segre
     symbol of each merged eigenvalue equals the multiset union of the
     symbols of the branches that merge there;
  2. the generalized eigenspace of each branch has a gap-metric limit
     along every probed path, and the limits agree across paths;
  3. the limits form a direct sum decomposition of C^n.

Condition 2 is probed on finitely many polynomial paths with geometric
sample schedules; the exact kernel-sheaf value of a univariate family
gives an independent check of each path limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoalescencePathError,
    ExactnessError,
    GenericityError,
    ShapeError,
    ValidationError,
)
from .polynomials import Poly
from .scalars import ComplexRational, to_complex, to_exact
from .subspaces import Subspace, gap_distance, generalized_eigenspace

DEFAULT_SEP_TOL = 1e-12
# deepest sample 2^-30: small enough for gap-Cauchy tests at 1e-8, large
# enough that rank gaps of order t in powered matrices stay resolvable
DEEP_SAMPLES = tuple(2.0 ** -j for j in range(6, 31))
SHALLOW_SAMPLES = tuple(2.0 ** -j for j in range(3, 13))
PATH_RANK_TOL = 1e-12


def _numerical_rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if len(s) == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


class MatrixFamily:
    """Polynomial matrix family with optional declared eigenvalue branches."""

    __slots__ = ("d", "n", "entries", "branches", "exact")

    def __init__(self, d: int, n: int, entries, branches=None, validate: bool = True):
        self.d = int(d)
        self.n = int(n)
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ShapeError(f"entries must be {n}x{n}")
        for row in entries:
            for p in row:
                if not isinstance(p, Poly):
                    raise ValidationError("entries must be polynomials")
                if p.d != d:
                    raise ShapeError("entry polynomial has wrong variable count")
        self.entries = [list(r) for r in entries]
        self.exact = all(p.exact for r in self.entries for p in r)
        if branches is not None:
            branches = [(p, int(m)) for p, m in branches]
            for p, m in branches:
                if p.d != d:
                    raise ShapeError("branch polynomial has wrong variable count")
                if m < 1:
                    raise ValidationError("branch multiplicity must be >= 1")
            if sum(m for _, m in branches) != n:
                raise ValidationError("branch multiplicities must sum to n")
        self.branches = branches
        if validate and branches is not None:
            self._validate_branches()

    def _validate_branches(self, points: int = 20, tol: float = 1e-6):
        rng = np.random.default_rng(1234)
        for _ in range(points):
            x = rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d)
            a = self.eval(x)
            eig = np.sort_complex(np.linalg.eigvals(a))
            declared = []
            for p, m in self.branches:
                declared.extend([complex(p.eval(x))] * m)
            declared = np.sort_complex(np.array(declared))
            scale = max(1.0, float(np.max(np.abs(a))))
            if np.max(np.abs(eig - declared)) > tol * scale:
                raise ValidationError(
                    "declared branches do not match the spectrum at a sample point"
                )

    # -- evaluation -------------------------------------------------------------

    def eval(self, point) -> np.ndarray:
        pt = [to_complex(x) for x in point]
        a = np.empty((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for j in range(self.n):
                a[i, j] = to_complex(self.entries[i][j].eval(pt))
        return a

    def branch_values(self, point) -> list:
        if self.branches is None:
            raise ValidationError("family has no declared branches")
        pt = [to_complex(x) for x in point]
        return [complex(p.eval(pt)) for p, _ in self.branches]

    def min_branch_separation(self, point) -> float:
        vals = self.branch_values(point)
        r = len(vals)
        if r < 2:
            return float("inf")
        return min(abs(vals[i] - vals[j]) for i in range(r) for j in range(i + 1, r))

    def is_coalescence_point(self, point, sep_tol: float = DEFAULT_SEP_TOL) -> bool:
        """Whether distinct branches collide at the point.

        With declared branches this is a direct value comparison; without
        them the spectrum cardinality at the point is compared with the
        cardinality at nearby perturbed points.
        """
        if self.branches is not None:
            vals = self.branch_values(point)
            scale = max(1.0, max(abs(v) for v in vals))
            return self.min_branch_separation(point) <= sep_tol * scale
        base = _spectrum_card(self.eval(point), 1e-7)
        rng = np.random.default_rng(99)
        best = base
        for _ in range(8):
            dx = 1e-3 * (rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d))
            pert = [to_complex(x) + e for x, e in zip(point, dx)]
            best = max(best, _spectrum_card(self.eval(pert), 1e-7))
        return best > base

    # -- restriction -------------------------------------------------------------

    def restrict_to_path(self, curves: list) -> "MatrixFamily":
        """Compose with a polynomial curve t -> x(t), giving a d=1 family."""
        if len(curves) != self.d:
            raise ShapeError("need one curve component per variable")
        exact = self.exact and all(c.exact for c in curves)
        if exact:
            cs = list(curves)
            rows = [[p.subs_univariate(cs) for p in r] for r in self.entries]
            br = (
                None
                if self.branches is None
                else [(p.subs_univariate(cs), m) for p, m in self.branches]
            )
        else:
            cs = [c.to_float() for c in curves]
            rows = [[p.to_float().subs_univariate(cs) for p in r] for r in self.entries]
            br = (
                None
                if self.branches is None
                else [(p.to_float().subs_univariate(cs), m) for p, m in self.branches]
            )
        return MatrixFamily(1, self.n, rows, br, validate=False)


def _spectrum_card(a: np.ndarray, tol: float) -> int:
    eig = np.linalg.eigvals(a)
    scale = max(1.0, float(np.max(np.abs(eig))))
    thr = tol * scale
    eig = eig[np.lexsort((eig.imag, eig.real))]
    card = 1
    for prev, v in zip(eig, eig[1:]):
        if abs(v - prev) > thr:
            card += 1
    return card


def segre_at_eigenvalue(a: np.ndarray, mu: complex, multiplicity: int | None = None,
                        tol: float = 1e-8):
    """Block-size partition of one eigenvalue via rank sequences of powers.

    Returns a weakly decreasing tuple of block sizes, or None when the
    rank sequence is numerically inconsistent (non-monotone drops or a
    total that misses the declared multiplicity).
    """
    n = a.shape[0]
    m = a - complex(mu) * np.eye(n)
    scale = np.linalg.norm(m, 2)
    if scale > 0:
        m = m / scale
    ranks = [n]
    power = np.eye(n, dtype=complex)
    for _ in range(n):
        power = power @ m
        ranks.append(_numerical_rank(power, tol))
    drops = []
    for k in range(1, n + 1):
        drops.append(ranks[k - 1] - ranks[k])
    for k in range(1, len(drops)):
        if drops[k] > drops[k - 1]:
            return None
    if any(dk < 0 for dk in drops):
        return None
    parts = []
    # drops[k-1] counts blocks of size >= k; conjugate to block sizes
    for k in range(len(drops), 0, -1):
        count_ge_k = drops[k - 1]
        count_ge_k1 = drops[k] if k < len(drops) else 0
        parts.extend([k] * (count_ge_k - count_ge_k1))
    parts.sort(reverse=True)
    if multiplicity is not None and sum(parts) != multiplicity:
        return None
    return tuple(parts)


def multiunion(partitions: list) -> tuple:
    out = []
    for p in partitions:
        out.extend(p)
    out.sort(reverse=True)
    return tuple(out)


# -- exact kernel-sheaf value for univariate families ---------------------------


def _sympy_scalar(c, exact: bool):
    import sympy

    if exact:
        cr = to_exact(c)
        return sympy.Rational(cr.re.numerator, cr.re.denominator) + sympy.I * sympy.Rational(
            cr.im.numerator, cr.im.denominator
        )
    raise ExactnessError("exact coefficients required")


def _vanishing_order(expr, x, x0, cap: int):
    import sympy

    if expr == 0:
        return cap
    order = 0
    p = expr
    while order < cap and sympy.simplify(p.subs(x, x0)) == 0:
        p = sympy.cancel(p / (x - x0))
        order += 1
    return order


def kernel_sheaf_value_1d(family: MatrixFamily, x0) -> Subspace:
    """Value at x0 of the kernel sheaf of a univariate polynomial matrix.

    Exact computation over the rational function field: take a kernel
    basis, clear denominators, strip common (x - x0) factors, then refine
    to a local module basis so that the evaluations at x0 are independent;
    their span is the space of values of kernel germs.  Requires exact
    (rational complex) coefficients.
    """
    import sympy

    if family.d != 1:
        raise ShapeError("kernel sheaf value requires a one-variable family")
    if not family.exact:
        raise ExactnessError(
            "kernel sheaf values need exact rational coefficients; floating input is refused"
        )
    x0 = to_exact(x0)
    n = family.n
    x = sympy.Symbol("x")
    sx0 = sympy.Rational(x0.re.numerator, x0.re.denominator) + sympy.I * sympy.Rational(
        x0.im.numerator, x0.im.denominator
    )
    mat = sympy.Matrix([[p.to_sympy([x]) for p in row] for row in family.entries])
    null = mat.nullspace()
    if not null:
        return Subspace.zero(n)

    cols = []
    for v in null:
        v = v.applyfunc(sympy.cancel)
        dens = [sympy.fraction(e)[1] for e in v]
        lcm = sympy.lcm(dens)
        w = v.applyfunc(lambda e: sympy.expand(sympy.cancel(e * lcm)))
        ordv = min(_vanishing_order(w[i], x, sx0, cap=64) for i in range(n))
        if ordv > 0:
            w = w.applyfunc(lambda e: sympy.expand(sympy.cancel(e / (x - sx0) ** ordv)))
        cols.append(w)

    k = len(cols)
    # refine to a module basis: combinations vanishing at x0 can be divided
    # down, which only enlarges the span of values
    for _ in range(64 * n):
        ev = sympy.Matrix([[sympy.simplify(cols[j][i].subs(x, sx0)) for j in range(k)] for i in range(n)])
        if ev.rank() == k:
            break
        null_comb = ev.nullspace()[0]
        w = sympy.zeros(n, 1)
        for j in range(k):
            if null_comb[j] != 0:
                w = w + null_comb[j] * cols[j]
        w = w.applyfunc(sympy.expand)
        ordv = min(_vanishing_order(w[i], x, sx0, cap=64) for i in range(n))
        if ordv == 0:
            raise ValidationError("kernel refinement failed to vanish; input may be inconsistent")
        w = w.applyfunc(lambda e: sympy.expand(sympy.cancel(e / (x - sx0) ** ordv)))
        pivot = next(j for j in range(k) if null_comb[j] != 0)
        cols[pivot] = w
    else:
        raise ValidationError("kernel refinement did not terminate")

    ev = np.array(
        [[complex(cols[j][i].subs(x, sx0)) for j in range(k)] for i in range(n)], dtype=complex
    )
    return Subspace.from_spanning(ev)


def kernel_sheaf_limit(family: MatrixFamily, branch_index: int, curves: list) -> Subspace:
    """K[(A - lam_i)^n ; 0] along the polynomial path x(t), exact route."""
    if family.branches is None:
        raise ValidationError("family has no declared branches")
    restricted = family.restrict_to_path(curves)
    lam, _ = restricted.branches[branch_index]
    n = family.n
    rows = [
        [restricted.entries[i][j] - lam if i == j else restricted.entries[i][j] for j in range(n)]
        for i in range(n)
    ]
    power = rows
    for _ in range(n - 1):
        power = _poly_mat_mul(power, rows)
    powered = MatrixFamily(1, n, power, None, validate=False)
    return kernel_sheaf_value_1d(powered, 0)


def _poly_mat_mul(a, b):
    n = len(a)
    m = len(b[0])
    inner = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


# -- path limits ------------------------------------------------------------------


def _point_on_path(curves: list, t: float) -> list:
    return [complex(c.to_float().eval([t])) for c in curves]


def _gen_eigenspace_with_noise(a: np.ndarray, mu: complex, rank_tol: float):
    """Generalized eigenspace plus a first-order angular noise estimate.

    The estimate eps * sigma_max / sigma_r bounds the rotation of the
    computed kernel caused by SVD backward error; it grows as the rank
    gap of the powered matrix closes, which is exactly the regime where
    consecutive path samples stop being comparable at fixed tolerance.
    """
    n = a.shape[0]
    m = a - complex(mu) * np.eye(n)
    scale = np.linalg.norm(m, 2)
    if scale > 0:
        m = m / scale
    p = np.linalg.matrix_power(m, n)
    _, s, vh = np.linalg.svd(p)
    smax = s[0] if len(s) else 0.0
    thr = rank_tol * smax if smax > 0 else rank_tol
    r = int(np.sum(s > thr))
    basis = vh[r:, :].conj().T
    noise = float(np.finfo(float).eps * smax / s[r - 1]) if r > 0 else 0.0
    return Subspace(basis), noise


def _probe_path(
    family: MatrixFamily,
    branch_index: int,
    path: list,
    samples: list,
    tol: float,
    sep_tol: float,
    rank_tol: float = PATH_RANK_TOL,
):
    """Sample a branch's generalized eigenspace along a path, shallow first.

    Stops as soon as three consecutive gap distances settle below tol
    plus a capped numerical-noise allowance, returning that sample's
    subspace; walking deeper only trades truncation error for SVD noise.
    Returns (limit or None, final consecutive gap).
    """
    if family.branches is None:
        raise ValidationError("family has no declared branches")
    if not 0 <= branch_index < len(family.branches):
        raise ValidationError("branch index out of range")
    samples = [float(t) for t in samples]
    if len(samples) < 4:
        raise ValidationError("need at least 4 path samples")
    if any(t <= 0 for t in samples) or any(
        samples[i] <= samples[i + 1] for i in range(len(samples) - 1)
    ):
        raise ValidationError("samples must be positive and strictly decreasing")

    window = 3
    spaces, noises, gaps, settled = [], [], [], []
    for t in samples:
        pt = _point_on_path(path, t)
        if family.is_coalescence_point(pt, sep_tol):
            raise CoalescencePathError(f"sample t={t!r} lies on the coalescence locus")
        a = family.eval(pt)
        mu = family.branch_values(pt)[branch_index]
        sp, nu = _gen_eigenspace_with_noise(a, mu, rank_tol)
        spaces.append(sp)
        noises.append(nu)
        if len(spaces) >= 2:
            g = gap_distance(spaces[-2], spaces[-1])
            gaps.append(g)
            allowance = min(1e-5, 10.0 * (noises[-2] + noises[-1]))
            settled.append(g < tol + allowance)
            if len(settled) >= window and all(settled[-window:]):
                return spaces[-1], gaps[-1]
    return None, (gaps[-1] if gaps else float("nan"))


def limit_along_path(
    family: MatrixFamily,
    branch_index: int,
    path: list,
    samples=None,
    tol: float = 1e-8,
    sep_tol: float = DEFAULT_SEP_TOL,
    rank_tol: float = PATH_RANK_TOL,
):
    """Gap-metric limit of a branch's generalized eigenspace along a path.

    The path is a list of d univariate polynomials with x(0) the probed
    center.  Samples must decrease to 0; each one is checked to be off
    the coalescence locus.  Returns the final subspace when consecutive
    gap distances settle below tol, otherwise None.
    """
    if samples is None:
        samples = list(DEEP_SAMPLES)
    limit, _ = _probe_path(family, branch_index, path, samples, tol, sep_tol, rank_tol)
    return limit


def default_paths(d: int, x0) -> list:
    """Coordinate rays and the diagonal ray from x0, as polynomial curves."""
    exact = all(_is_exactable(c) for c in x0)
    t = Poly.variable(1, 0, exact)

    def ray(direction):
        curves = []
        for a in range(d):
            c0 = Poly.constant(1, to_exact(x0[a]) if exact else to_complex(x0[a]), exact)
            curves.append(c0 + t * direction[a] if direction[a] else c0)
        return curves

    paths = []
    for a in range(d):
        e = [0] * d
        e[a] = 1
        paths.append(ray(e))
    if d > 1:
        paths.append(ray([1] * d))
    return paths


def _is_exactable(c) -> bool:
    try:
        to_exact(c)
        return True
    except ExactnessError:
        return False


@dataclass
class PathProbe:
    path_index: int
    branch_index: int
    used_samples: int
    limit_dim: int | None
    final_gap: float | None
    converged: bool


@dataclass
class JordanizabilityReport:
    cond1: bool
    cond2: list
    cond3: bool
    verdict: bool
    branch_segres: list
    center_segres: list
    limits: list
    probes: list = field(default_factory=list)
    skipped_paths: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "cond1": self.cond1,
            "cond2": list(self.cond2),
            "cond3": self.cond3,
            "verdict": self.verdict,
            "branch_segres": [list(s) if s else None for s in self.branch_segres],
            "center_segres": [
                {"value": [v.real, v.imag], "actual": list(a), "expected": list(e)}
                for v, a, e in self.center_segres
            ],
            "limit_dims": [s.dim if s is not None else None for s in self.limits],
            "probes": [
                {
                    "path": p.path_index,
                    "branch": p.branch_index,
                    "samples": p.used_samples,
                    "limit_dim": p.limit_dim,
                    "final_gap": p.final_gap,
                    "converged": p.converged,
                }
                for p in self.probes
            ],
            "skipped_paths": list(self.skipped_paths),
            "notes": list(self.notes),
        }


def jordanizability_report(
    family: MatrixFamily,
    x0,
    paths=None,
    samples=None,
    tol: float = 1e-8,
    sep_tol: float = DEFAULT_SEP_TOL,
    rank_tol: float = PATH_RANK_TOL,
    segre_tol: float = 1e-8,
) -> JordanizabilityReport:
    """Probe the three holomorphic-Jordanizability conditions at a point."""
    if family.branches is None:
        raise ValidationError("jordanizability check requires declared branches")
    d, n = family.d, family.n
    if len(list(x0)) != d:
        raise ShapeError("probe point has wrong dimension")
    if paths is None:
        paths = default_paths(d, list(x0))
    if samples is None:
        samples = list(DEEP_SAMPLES)
    r = len(family.branches)
    notes = []

    # drop paths that live inside the coalescence locus
    usable, skipped = [], []
    for pi, path in enumerate(paths):
        offs = [t for t in samples if not family.is_coalescence_point(_point_on_path(path, t), sep_tol)]
        if len(offs) >= 4:
            usable.append((pi, path, offs))
        else:
            skipped.append(pi)
    if not usable:
        raise GenericityError("no off-coalescence sample found on any probe path")

    # condition 1a: per-branch Segre symbols constant off the locus
    shallow_points = []
    for pi, path, _ in usable:
        for t in SHALLOW_SAMPLES:
            pt = _point_on_path(path, t)
            if not family.is_coalescence_point(pt, sep_tol):
                shallow_points.append(pt)
    branch_segres = []
    cond1 = True
    for bi, (bp, bm) in enumerate(family.branches):
        seen = set()
        for pt in shallow_points:
            a = family.eval(pt)
            mu = family.branch_values(pt)[bi]
            s = segre_at_eigenvalue(a, mu, bm, segre_tol)
            if s is not None:
                seen.add(s)
        if len(seen) != 1:
            cond1 = False
            branch_segres.append(None)
            notes.append(f"branch {bi}: off-locus Segre symbols {sorted(seen)}")
        else:
            branch_segres.append(next(iter(seen)))

    # condition 1b: at the center, each merged eigenvalue's Segre symbol
    # is the multiset union of the symbols of the branches merging there
    center_segres = []
    pt0 = [to_complex(c) for c in x0]
    a0 = family.eval(pt0)
    vals0 = family.branch_values(pt0)
    scale0 = max(1.0, max(abs(v) for v in vals0))
    groups: list[list[int]] = []
    for bi, v in enumerate(vals0):
        for g in groups:
            if abs(vals0[g[0]] - v) <= 1e-9 * scale0:
                g.append(bi)
                break
        else:
            groups.append([bi])
    for g in groups:
        mult = sum(family.branches[bi][1] for bi in g)
        actual = segre_at_eigenvalue(a0, vals0[g[0]], mult, segre_tol)
        if actual is None:
            cond1 = False
            notes.append("center Segre symbol numerically inconsistent")
            continue
        if any(branch_segres[bi] is None for bi in g):
            continue
        expected = multiunion([branch_segres[bi] for bi in g])
        center_segres.append((vals0[g[0]], actual, expected))
        if actual != expected:
            cond1 = False

    # condition 2: path limits per branch
    cond2 = []
    limits = []
    probes = []
    for bi in range(r):
        branch_limits = []
        ok = True
        for pi, path, offs in usable:
            try:
                lim, final_gap = _probe_path(family, bi, path, offs, tol, sep_tol, rank_tol)
            except CoalescencePathError:
                continue
            converged = lim is not None
            probes.append(
                PathProbe(
                    path_index=pi,
                    branch_index=bi,
                    used_samples=len(offs),
                    limit_dim=lim.dim if lim is not None else None,
                    final_gap=final_gap,
                    converged=converged,
                )
            )
            if not converged:
                ok = False
            else:
                branch_limits.append(lim)
        if not branch_limits:
            ok = False
        if ok:
            base = branch_limits[0]
            for other in branch_limits[1:]:
                if gap_distance(base, other) > max(tol, 1e-6):
                    ok = False
                    notes.append(f"branch {bi}: path limits disagree")
                    break
        cond2.append(ok)
        limits.append(branch_limits[0] if ok and branch_limits else None)

    # condition 3: the limits decompose C^n; the rank cutoff adapts to the
    # accuracy the path limits actually reached, since dependence below
    # that resolution is indistinguishable from exact dependence
    if all(cond2) and all(s is not None for s in limits):
        total = sum(s.dim for s in limits)
        worst_gap = max((p.final_gap for p in probes if p.converged), default=0.0)
        cutoff = min(1e-3, max(1e-10, 20.0 * (worst_gap + tol)))
        stacked = np.hstack([s.basis for s in limits]) if limits else np.zeros((n, 0))
        rank = _numerical_rank(stacked, cutoff) if stacked.shape[1] else 0
        cond3 = total == n and rank == n
    else:
        cond3 = False
        notes.append("condition 3 not evaluated: missing limits")

    verdict = bool(cond1 and all(cond2) and cond3)
    return JordanizabilityReport(
        cond1=bool(cond1),
        cond2=[bool(c) for c in cond2],
        cond3=bool(cond3),
        verdict=verdict,
        branch_segres=branch_segres,
        center_segres=center_segres,
        limits=limits,
        probes=probes,
        skipped_paths=skipped,
        notes=notes,
    )
