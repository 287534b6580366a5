"""Connection frames with a rank-one irregular pole and their formal gauge
reduction to normal form.

A frame consists of a diagonal series matrix Delta0 = diag(f_1, ..., f_n),
a constant diagonal matrix diag(b_1, ..., b_n), and an off-diagonal series
matrix L.  The derived data are

    B       = diag(b) + [L, Delta0],
    omega_a = [d_a Delta0, L]            (one matrix per coordinate),

and the frame's connection form is

    Omega = -(Delta0 + B / z) dz - z dDelta0 + omega.

The normal form is Omega_nf = -d(z Delta0) - diag(b) dz / z.  A gauge series
Phi = Id + F_1 z^{-1} + ... + F_K z^{-K} reduces Omega to Omega_nf exactly
when the ladder identities

    [Delta0, F_{k+1}] + B F_k - F_k diag(b) + k F_k = 0,          k >= 0,
    d F_k = [F_1, dDelta0] F_k + [dDelta0, F_{k+1}],              k >= 0,

hold with F_0 = Id.  formal_simplify builds the F_k order by order; at a
center where branches of Delta0 coalesce, the off-diagonal entries of the
coalescent pairs are continued through the derivative identity

    (F_{k+1})_ij = ([F_1, d_h Delta0] F_k - d_h F_k)_ij / (d_h f_j - d_h f_i)

along a pivot coordinate h with separating differentials.  gauge_residual
re-evaluates the defining gauge equation independently, as a Laurent
polynomial in z, so the solver and the verifier share no code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CoalescencePathError,
    GenericityError,
    ResonanceError,
    ShapeError,
    ValidationError,
)
from .scalars import ComplexRational, scalar_abs2, to_complex, to_exact
from .series import SeriesMatrix, SeriesRing, TruncatedSeries

_RESONANCE_TOL = 1e-8
_HOLCON_FLOOR = 1e-8


def _nonzero_int(v, exact: bool):
    """The value of v as a nonzero integer, or None."""
    if exact:
        v = to_exact(v)
        if v.im != 0 or v.re.denominator != 1 or v.re == 0:
            return None
        return int(v.re)
    v = to_complex(v)
    m = round(v.real)
    if abs(v.imag) > _RESONANCE_TOL or abs(v.real - m) > _RESONANCE_TOL or m == 0:
        return None
    return m


class FramedConnection:
    """Frame data (Delta0, diag(b), L) with the derived matrices B and omega.

    Delta0 must be strictly diagonal and L strictly off-diagonal, over a
    common series ring.  Pairs of branches whose center values agree are
    recorded as coalescent (ordered pairs, both orientations); nonzero
    integer differences b_i - b_j at coalescent pairs are recorded in
    pnr_violations without raising.
    """

    def __init__(self, delta0: SeriesMatrix, bdiag, L: SeriesMatrix, tol: float = 1e-10):
        n, m = delta0.shape
        if n != m:
            raise ShapeError("diagonal part must be square")
        nl, ml = L.shape
        if (nl, ml) != (n, n):
            raise ShapeError(f"off-diagonal part has shape {(nl, ml)}, expected {(n, n)}")
        if not delta0.ring.compatible(L.ring):
            raise ShapeError("diagonal and off-diagonal parts live in different series rings")
        if len(bdiag) != n:
            raise ShapeError(f"exponent diagonal has length {len(bdiag)}, expected {n}")
        if not (isinstance(tol, (int, float)) and tol > 0):
            raise ValidationError("tol must be a positive real number")
        for i in range(n):
            for j in range(n):
                if i != j and not delta0.entry(i, j).is_zero():
                    raise ShapeError(f"diagonal part has a nonzero entry at ({i},{j})")
                if i == j and not L.entry(i, i).is_zero():
                    raise ShapeError(f"off-diagonal part has a nonzero diagonal entry at ({i},{i})")

        ring = delta0.ring
        self.delta0 = delta0
        self.L = L
        self.ring = ring
        self.n = n
        self.d = ring.d
        self.exact = ring.exact
        self.center = ring.center
        self.tol = float(tol)
        self.b = tuple((to_exact if ring.exact else to_complex)(v) for v in bdiag)
        self.f = [delta0.entry(i, i) for i in range(n)]

        rows = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            rows[i][i] = ring.const(self.b[i])
        self.bdiag_matrix = SeriesMatrix(rows)
        self.B = self.bdiag_matrix + L.commutator(delta0)
        self.omega = [delta0.diff(a).commutator(L) for a in range(self.d)]

        self._classify_pairs()

    def _classify_pairs(self):
        fvals = [f.constant_term() for f in self.f]
        if self.exact:
            coal = [
                (i, j)
                for i in range(self.n)
                for j in range(self.n)
                if i != j and fvals[i] == fvals[j]
            ]
        else:
            fscale = max([1.0] + [abs(v) for v in fvals])
            coal = [
                (i, j)
                for i in range(self.n)
                for j in range(self.n)
                if i != j and abs(fvals[i] - fvals[j]) <= self.tol * fscale
            ]
        self.coalescent_pairs = tuple(sorted(coal))
        self.pnr_violations = []
        for (i, j) in self.coalescent_pairs:
            m = _nonzero_int(self.b[i] - self.b[j], self.exact)
            if m is not None:
                self.pnr_violations.append((i, j, m))
        self._pivots: dict = {}

    def is_coalescent(self, i: int, j: int) -> bool:
        return (i, j) in self.coalescent_pairs

    def pivot(self, i: int, j: int) -> int:
        """Coordinate with the largest |d_a f_j - d_a f_i| at the center."""
        key = (i, j)
        if key in self._pivots:
            return self._pivots[key]
        e0 = [0] * self.d
        best, best_mag = None, None
        for a in range(self.d):
            e = tuple(e0[:a] + [1] + e0[a + 1 :])
            g = self.f[j].coeff(e) - self.f[i].coeff(e)
            mag = scalar_abs2(g)
            if mag != 0 and (best is None or mag > best_mag):
                best, best_mag = a, mag
        if best is None:
            raise GenericityError(
                f"coalescent pair ({i},{j}) has equal differentials at the center"
            )
        self._pivots[key] = best
        return best

    def restriction(self):
        """The pair (Delta0, B) evaluated at the center, as constant matrices."""
        return self.delta0.eval(self.center), self.B.eval(self.center)


def build_connection(delta0: SeriesMatrix, bdiag, L: SeriesMatrix, tol: float = 1e-10) -> FramedConnection:
    return FramedConnection(delta0, bdiag, L, tol=tol)


def connection_from_de(problem, jet, tol: float | None = None) -> FramedConnection:
    """Frame whose off-diagonal datum is a Darboux-Egoroff jet.

    Delta0 is the diagonal of the problem's branch functions expanded in the
    jet's ring, diag(b) is the problem's exponent tuple, and L is the jet
    matrix itself.
    """
    ring = jet.F.ring
    fcs = problem.f_coefficients(ring)
    n = problem.n
    rows = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        rows[i][i] = TruncatedSeries(ring, fcs[i])
    delta0 = SeriesMatrix(rows)
    return FramedConnection(delta0, list(problem.b), jet.F, tol=problem.tol if tol is None else tol)


@dataclass
class GaugeSeries:
    """Truncated gauge transform Phi = Id + F_1 z^{-1} + ... + F_K z^{-K}."""

    F: list

    def __post_init__(self):
        for k, M in enumerate(self.F):
            n, m = M.shape
            if n != m:
                raise ShapeError(f"gauge term {k + 1} is not square")
            if not M.ring.compatible(self.F[0].ring):
                raise ShapeError("gauge terms live in different series rings")
            if M.shape != self.F[0].shape:
                raise ShapeError("gauge terms have mismatched sizes")

    @property
    def K(self) -> int:
        return len(self.F)

    def term(self, k: int) -> SeriesMatrix:
        if not 1 <= k <= len(self.F):
            raise ValidationError(f"gauge term index {k} out of range 1..{len(self.F)}")
        return self.F[k - 1]

    def to_float(self) -> "GaugeSeries":
        return GaugeSeries([M.to_float() for M in self.F])


def _resonance_guard(conn: FramedConnection, k: int):
    # division by b_i - b_j + k + 1 pins the coalescent entries of F_{k+1}
    target = -(k + 1)
    for (i, j) in conn.coalescent_pairs:
        bd = conn.b[i] - conn.b[j]
        if conn.exact:
            hit = bd == target
        else:
            hit = abs(to_complex(bd) - target) < _RESONANCE_TOL
        if hit:
            raise ResonanceError(
                f"coalescent pair ({i},{j}) is resonant at gauge order {k + 1}: "
                f"b[{i}]-b[{j}] = {target}"
            )


def formal_simplify(conn: FramedConnection, K: int, mode: str = "regular") -> GaugeSeries:
    """Gauge terms F_1..F_K reducing the frame to normal form.

    Regular mode requires pairwise distinct center values f_i and solves the
    ladder identity by series division for every off-diagonal entry.
    Coalescent mode seeds F_1'' = L, divides by f_j - f_i only at pairs that
    stay separated at the center, and continues the coalescent entries with
    the pivot-derivative identity; it raises the resonance error when
    b_i - b_j + k + 1 vanishes for a coalescent pair at a computed order.
    Diagonal entries come from the next ladder rung in both modes.
    """
    if mode not in ("regular", "coalescent"):
        raise ValidationError(f"unknown mode {mode!r}, expected 'regular' or 'coalescent'")
    if not isinstance(K, int) or K < 0:
        raise ValidationError("truncation order must be a nonnegative integer")
    n, ring = conn.n, conn.ring
    if mode == "regular" and conn.coalescent_pairs:
        raise GenericityError(
            f"center has coalescent branch pairs {list(conn.coalescent_pairs)}; "
            "regular mode needs pairwise distinct f_i"
        )
    pivots = {}
    if mode == "coalescent":
        for (i, j) in conn.coalescent_pairs:
            pivots[(i, j)] = conn.pivot(i, j)

    inv, dinv = {}, {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if (i, j) in pivots:
                h = pivots[(i, j)]
                dinv[(i, j)] = (conn.f[j].diff(h) - conn.f[i].diff(h)).invert()
            else:
                inv[(i, j)] = (conn.f[j] - conn.f[i]).invert()

    terms = []
    Fk = ring.identity_matrix(n)
    for k in range(K):
        if mode == "coalescent":
            _resonance_guard(conn, k)
        rows = [[ring.zero() for _ in range(n)] for _ in range(n)]
        if mode == "coalescent" and k == 0:
            for i in range(n):
                for j in range(n):
                    if i != j:
                        rows[i][j] = conn.L.entry(i, j)
        else:
            rhs = conn.B @ Fk - Fk @ conn.bdiag_matrix + Fk.scale(k)
            dnum = {}
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    if (i, j) in pivots:
                        h = pivots[(i, j)]
                        if h not in dnum:
                            bracket = terms[0].commutator(conn.delta0.diff(h))
                            dnum[h] = bracket @ Fk - Fk.diff(h)
                        rows[i][j] = dnum[h].entry(i, j) * dinv[(i, j)]
                    else:
                        rows[i][j] = rhs.entry(i, j) * inv[(i, j)]
        for i in range(n):
            acc = ring.zero()
            for l in range(n):
                if l != i:
                    acc = acc + conn.B.entry(i, l) * rows[l][i]
            rows[i][i] = acc.scale(Fraction(-1, k + 1))
        Fk = SeriesMatrix(rows)
        terms.append(Fk)
    return GaugeSeries(terms)


def _laurent_mul(A: dict, B: dict) -> dict:
    out: dict = {}
    for ma, MA in A.items():
        for mb, MB in B.items():
            P = MA @ MB
            m = ma + mb
            out[m] = out[m] + P if m in out else P
    return out


def _laurent_acc(out: dict, m: int, M: SeriesMatrix, sign: int = 1):
    M = M if sign > 0 else -M
    out[m] = out[m] + M if m in out else M


@dataclass
class GaugeResidualReport:
    """Laurent coefficients of dPhi + Omega Phi - Phi Omega_nf.

    dz maps a z-order to its matrix coefficient; dx holds one such map per
    coordinate.  Orders down to -K (dz) and -(K-1) (dx) are fully determined
    by F_1..F_K; the single deeper order in each part involves the absent
    F_{K+1} and is reported as the tail, never asserted.
    """

    K: int
    dz: dict
    dx: list

    def _split(self, part: dict, cutoff: int):
        det = {m: M for m, M in part.items() if m >= cutoff}
        tail = {m: M for m, M in part.items() if m < cutoff}
        return det, tail

    def determined(self):
        dz, _ = self._split(self.dz, -self.K)
        dx = [self._split(p, -(self.K - 1))[0] for p in self.dx]
        return dz, dx

    def tail(self):
        _, dz = self._split(self.dz, -self.K)
        dx = [self._split(p, -(self.K - 1))[1] for p in self.dx]
        return dz, dx

    def max_abs_determined(self) -> float:
        dz, dx = self.determined()
        mags = [M.max_abs() for M in dz.values()]
        mags += [M.max_abs() for p in dx for M in p.values()]
        return max(mags) if mags else 0.0

    def max_abs_tail(self) -> float:
        dz, dx = self.tail()
        mags = [M.max_abs() for M in dz.values()]
        mags += [M.max_abs() for p in dx for M in p.values()]
        return max(mags) if mags else 0.0

    def is_zero_determined(self) -> bool:
        dz, dx = self.determined()
        return all(M.is_zero() for M in dz.values()) and all(
            M.is_zero() for p in dx for M in p.values()
        )

    def to_dict(self) -> dict:
        dz, dx = self.determined()
        tz, tx = self.tail()
        return {
            "K": self.K,
            "dz": {str(m): dz[m].max_abs() for m in sorted(dz, reverse=True)},
            "dx": [
                {str(m): p[m].max_abs() for m in sorted(p, reverse=True)} for p in dx
            ],
            "determined_max": self.max_abs_determined(),
            "determined_exact_zero": self.is_zero_determined(),
            "tail_dz": {str(m): tz[m].max_abs() for m in sorted(tz, reverse=True)},
            "tail_dx": [
                {str(m): p[m].max_abs() for m in sorted(p, reverse=True)} for p in tx
            ],
        }


def gauge_residual(conn: FramedConnection, gs: GaugeSeries, K: int | None = None) -> GaugeResidualReport:
    """Evaluate the gauge equation on the first K terms of gs.

    The residual dPhi + Omega Phi - Phi Omega_nf is expanded as a Laurent
    polynomial in z with series-matrix coefficients, independently of the
    recursion that produced gs.
    """
    if K is None:
        K = gs.K
    if not isinstance(K, int) or K < 0 or K > gs.K:
        raise ValidationError(f"order must lie in 0..{gs.K}")
    if K > 0 and not gs.F[0].ring.compatible(conn.ring):
        raise ShapeError("gauge series and frame live in different series rings")
    if K > 0 and gs.F[0].shape != (conn.n, conn.n):
        raise ShapeError("gauge series size does not match the frame")
    n, ring = conn.n, conn.ring

    phi = {0: ring.identity_matrix(n)}
    for k in range(1, K + 1):
        phi[-k] = gs.F[k - 1]

    omega_dz = {0: -conn.delta0, -1: -conn.B}
    normal_dz = {0: -conn.delta0, -1: -conn.bdiag_matrix}
    dz = _laurent_mul(omega_dz, phi)
    for m, M in _laurent_mul(phi, normal_dz).items():
        _laurent_acc(dz, m, M, sign=-1)
    for k in range(1, K + 1):
        _laurent_acc(dz, -k - 1, gs.F[k - 1].scale(-k))

    dx = []
    for a in range(conn.d):
        da = conn.delta0.diff(a)
        omega_dx = {1: -da, 0: conn.omega[a]}
        normal_dx = {1: -da}
        ra = _laurent_mul(omega_dx, phi)
        for m, M in _laurent_mul(phi, normal_dx).items():
            _laurent_acc(ra, m, M, sign=-1)
        for k in range(1, K + 1):
            _laurent_acc(ra, -k, gs.F[k - 1].diff(a))
        dx.append(ra)
    return GaugeResidualReport(K=K, dz=dz, dx=dx)


@dataclass
class IntegrabilityReport:
    """Residuals of the four flatness identities of a deformation frame.

    eq1 and eq2 are 1-forms (one matrix per coordinate); eq3 and eq4 are
    2-forms keyed by coordinate pairs (a, b) with a < b.
    """

    order: int | None
    eq1: list
    eq2: list
    eq3: dict
    eq4: dict

    def _all(self):
        for M in self.eq1:
            yield M
        for M in self.eq2:
            yield M
        for M in self.eq3.values():
            yield M
        for M in self.eq4.values():
            yield M

    def max_abs(self) -> float:
        return max([M.max_abs(self.order) for M in self._all()] + [0.0])

    def is_zero(self) -> bool:
        return all(M.is_zero(self.order) for M in self._all())

    def to_dict(self) -> dict:
        def fam(ms):
            return max([M.max_abs(self.order) for M in ms] + [0.0])

        return {
            "order": self.order,
            "eq1_max": fam(self.eq1),
            "eq2_max": fam(self.eq2),
            "eq3_max": fam(self.eq3.values()),
            "eq4_max": fam(self.eq4.values()),
            "max": self.max_abs(),
            "exact_zero": self.is_zero(),
        }


def integrability_residual(delta0: SeriesMatrix, B: SeriesMatrix, varpi, order: int | None = None) -> IntegrabilityReport:
    """Residuals of the flatness conditions for the frame (Delta0, B, varpi).

        eq1: [dDelta0, B] + [Delta0, varpi]
        eq2: dB - [B, varpi]
        eq3: dDelta0 ^ varpi + varpi ^ dDelta0
        eq4: dvarpi + varpi ^ varpi

    varpi is a list with one series matrix per coordinate.  eq3 and eq4 are
    empty in one variable.
    """
    n, m = delta0.shape
    if n != m:
        raise ShapeError("diagonal part must be square")
    ring = delta0.ring
    for i in range(n):
        for j in range(n):
            if i != j and not delta0.entry(i, j).is_zero():
                raise ShapeError(f"diagonal part has a nonzero entry at ({i},{j})")
    if B.shape != (n, n) or not B.ring.compatible(ring):
        raise ShapeError("deformation matrix does not match the diagonal part")
    if len(varpi) != ring.d:
        raise ShapeError(f"one-form has {len(varpi)} components, expected {ring.d}")
    for W in varpi:
        if W.shape != (n, n) or not W.ring.compatible(ring):
            raise ShapeError("one-form component does not match the diagonal part")

    dparts = [delta0.diff(a) for a in range(ring.d)]
    eq1 = [dparts[a].commutator(B) + delta0.commutator(varpi[a]) for a in range(ring.d)]
    eq2 = [B.diff(a) - B.commutator(varpi[a]) for a in range(ring.d)]
    eq3, eq4 = {}, {}
    for a in range(ring.d):
        for b in range(a + 1, ring.d):
            eq3[(a, b)] = (
                dparts[a] @ varpi[b]
                - dparts[b] @ varpi[a]
                + varpi[a] @ dparts[b]
                - varpi[b] @ dparts[a]
            )
            eq4[(a, b)] = varpi[b].diff(a) - varpi[a].diff(b) + varpi[a].commutator(varpi[b])
    return IntegrabilityReport(order=order, eq1=eq1, eq2=eq2, eq3=eq3, eq4=eq4)


@dataclass
class DvWitnessReport:
    """Outcome of solving B'' = [L, Delta0], varpi'' = [dDelta0, L] for L.

    L is None exactly when obstructions is nonempty; each obstruction names
    an off-diagonal pair (0-based) and the reason division or consistency
    failed there.
    """

    L: SeriesMatrix | None
    obstructions: list
    max_inconsistency: float

    @property
    def ok(self) -> bool:
        return not self.obstructions

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "obstructions": [
                {"pair": list(p), "reason": r} for (p, r) in self.obstructions
            ],
            "max_inconsistency": self.max_inconsistency,
        }


def dv_witness(delta0: SeriesMatrix, B: SeriesMatrix, varpi, tol: float = 1e-10) -> DvWitnessReport:
    """Extract L with B'' = [L, Delta0] and varpi'' = [dDelta0, L], if any.

    Where f_j - f_i is invertible at the center, L_ij = B_ij / (f_j - f_i)
    and the one-form consistency varpi_a,ij = (d_a f_i - d_a f_j) L_ij is
    verified.  Where it is not invertible, solvability requires B_ij and all
    varpi_a,ij to vanish identically; otherwise the pair is reported as an
    obstruction.  Only off-diagonal data are consulted.
    """
    n, m = delta0.shape
    if n != m:
        raise ShapeError("diagonal part must be square")
    ring = delta0.ring
    if B.shape != (n, n) or not B.ring.compatible(ring):
        raise ShapeError("deformation matrix does not match the diagonal part")
    if len(varpi) != ring.d:
        raise ShapeError(f"one-form has {len(varpi)} components, expected {ring.d}")
    for W in varpi:
        if W.shape != (n, n) or not W.ring.compatible(ring):
            raise ShapeError("one-form component does not match the diagonal part")

    f = [delta0.entry(i, i) for i in range(n)]
    fvals = [s.constant_term() for s in f]
    fscale = max([1.0] + [scalar_abs2(v) ** 0.5 for v in fvals])
    rows = [[ring.zero() for _ in range(n)] for _ in range(n)]
    obstructions = []
    worst = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = f[j] - f[i]
            c0 = diff.constant_term()
            invertible = (c0 != 0) if ring.exact else (abs(to_complex(c0)) > tol * fscale)
            if invertible:
                lij = B.entry(i, j) * diff.invert()
                bad = 0.0
                for a in range(ring.d):
                    resid = varpi[a].entry(i, j) - lij * (f[i].diff(a) - f[j].diff(a))
                    if ring.exact:
                        if not resid.is_zero():
                            bad = max(bad, resid.max_abs())
                    else:
                        thr = tol * max(1.0, lij.max_abs(), varpi[a].entry(i, j).max_abs())
                        if resid.max_abs() > thr:
                            bad = max(bad, resid.max_abs())
                if bad > 0.0:
                    worst = max(worst, bad)
                    obstructions.append(
                        ((i, j), "one-form part inconsistent with the division witness")
                    )
                else:
                    rows[i][j] = lij
            else:
                def clean(s):
                    return s.is_zero() if ring.exact else s.max_abs() <= tol * fscale

                data = [B.entry(i, j)] + [varpi[a].entry(i, j) for a in range(ring.d)]
                if all(clean(s) for s in data):
                    continue
                worst = max(worst, max(s.max_abs() for s in data))
                obstructions.append(
                    ((i, j), "branch difference is not invertible at the center "
                     "but the off-diagonal data do not vanish")
                )
    if obstructions:
        return DvWitnessReport(L=None, obstructions=obstructions, max_inconsistency=worst)
    return DvWitnessReport(L=SeriesMatrix(rows), obstructions=[], max_inconsistency=0.0)


@dataclass
class HolconReport:
    """Samples of the coalescence-compatibility ratio for one branch pair.

    lhs holds (b_j - b_i - 1) L_ij - sum_l (f_l - f_i) L_il L_lj at each
    sample; ratios divide by f_i - f_j.  bounded reports whether the last
    four ratios stay within a ten percent spread (or keep shrinking), the
    executable reading of lhs = O(f_i - f_j).
    """

    pair: tuple
    ts: list
    lhs: list
    ratios: list
    spread: float
    bounded: bool

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "ts": [float(t) for t in self.ts],
            "lhs": [[v.real, v.imag] for v in self.lhs],
            "ratios": [[v.real, v.imag] for v in self.ratios],
            "spread": self.spread,
            "bounded": self.bounded,
        }


def holcon_check(conn: FramedConnection, pair, path, samples=None, tol: float = 1e-8) -> HolconReport:
    """Ratio test for the frame's compatibility with a coalescence point.

    path maps t to a parameter point with f_i = f_j at t = 0 and separated
    branches for t > 0; samples default to dyadic points 2^-1 .. 2^-12.  The
    verdict is computed from the last four ratios: bounded when they are all
    tiny, vary by at most ten percent, or decrease in magnitude; divergence
    otherwise.
    """
    i, j = pair
    if not (0 <= i < conn.n and 0 <= j < conn.n) or i == j:
        raise ValidationError(f"pair {pair!r} is not an off-diagonal index pair")
    if samples is None:
        samples = [2.0 ** -m for m in range(1, 13)]
    samples = list(samples)
    if len(samples) < 4:
        raise ValidationError("at least 4 samples are required for the verdict")

    fF = [s.to_float() for s in conn.f]
    LF = conn.L.to_float()
    bF = [to_complex(v) for v in conn.b]

    x0 = tuple(path(0.0))
    fi0, fj0 = fF[i].eval(x0), fF[j].eval(x0)
    scale = max(1.0, abs(fi0), abs(fj0))
    if abs(fi0 - fj0) > tol * scale:
        raise CoalescencePathError(
            f"path endpoint is off the coalescence locus for pair ({i},{j}): "
            f"|f_{i}-f_{j}| = {abs(fi0 - fj0):.3e}"
        )

    ts, lhs_vals, ratios = [], [], []
    for t in samples:
        x = tuple(path(t))
        fv = [s.eval(x) for s in fF]
        den = fv[i] - fv[j]
        if abs(den) <= 1e-15 * scale:
            raise CoalescencePathError(
                f"path interior touches the coalescence locus at t = {t}"
            )
        lv = [[LF.entry(p, q).eval(x) for q in range(conn.n)] for p in range(conn.n)]
        acc = (bF[j] - bF[i] - 1.0) * lv[i][j]
        for l in range(conn.n):
            if l != i:
                acc -= (fv[l] - fv[i]) * lv[i][l] * lv[l][j]
        ts.append(t)
        lhs_vals.append(acc)
        ratios.append(acc / den)

    last = ratios[-4:]
    maxr = max(abs(v) for v in last)
    spread = max(abs(a - b) for a in last for b in last)
    if maxr <= _HOLCON_FLOOR:
        bounded = True
    elif spread <= max(0.1 * maxr, _HOLCON_FLOOR):
        bounded = True
    else:
        bounded = all(
            abs(last[m + 1]) <= abs(last[m]) + _HOLCON_FLOOR for m in range(len(last) - 1)
        )
    return HolconReport(
        pair=(i, j), ts=ts, lhs=lhs_vals, ratios=ratios, spread=spread, bounded=bounded
    )
