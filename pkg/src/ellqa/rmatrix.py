"""The 9x9 dynamical elliptic R-matrix, its trigonometric limit and checks.

Entries are stored symbolically as sums of monomials in bracket factors
[a_u u + a_s s + c] (plain or plus), so the same data drives evaluation and
the derivation of quasi-periodicity multipliers.
"""
from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass, field
import numpy as np

from .context import BracketKind, EllipticContext
from .qseries import bracket, qpoch_raw
from .report import POLE_EPS, CheckReport, PoleError, rel_residual, rng_for
from .structfuncs import rho_plus


class WeightVector(enum.Enum):
    PLUS = "+"
    ZERO = "0"
    MINUS = "-"

    @property
    def wt(self) -> int:
        return {"+": 1, "0": 0, "-": -1}[self.value]


LABELS = ("+", "0", "-")
WEIGHTS = (1, 0, -1)
BASIS = tuple(a + b for a in LABELS for b in LABELS)


def index(pair: str) -> int:
    return BASIS.index(pair)


# ---------------------------------------------------------------------------
# symbolic entries


@dataclass(frozen=True)
class Br:
    """[au*u + as_*s + c], `plus` selects [.]_+."""

    au: int
    as_: int
    c: float
    plus: bool = False


Mono = tuple  # (coef, ((Br, power), ...))


def _m(coef, *factors):
    d: dict[Br, int] = {}
    for f, k in factors:
        d[f] = d.get(f, 0) + k
    return (coef, tuple(sorted(((f, k) for f, k in d.items() if k), key=repr)))


def _mul(a: Mono, b: Mono) -> Mono:
    return _m(a[0] * b[0], *a[1], *b[1])


def _sum_mul(xs, ys):
    return [_mul(x, y) for x in xs for y in ys]


def B(au, as_, c, k=1):
    return (Br(au, as_, c, False), k)


def P(au, as_, c, k=1):
    return (Br(au, as_, c, True), k)


def _g(sign):
    # G_s^{+-} = -[2s +- 2][s]_+ / ([2s][s +- 1]_+)
    return _m(-1, B(0, 2, 2 * sign), P(0, 1, 0), B(0, 2, 0, -1), P(0, 1, sign, -1))


def _entries():
    Gp, Gm = _g(+1), _g(-1)
    H = [_mul(Gp, _m(1, P(0, 1, -2.5), P(0, 1, 0.5, -1))),
         _mul(Gm, _m(1, P(0, 1, 2.5), P(0, 1, -0.5, -1)))]
    u_u1 = (B(1, 0, 0), B(1, 0, 1, -1))  # [u]/[u+1]
    one = B(0, 0, 1)
    E: dict[tuple[str, str], list] = {}
    E["++", "++"] = [_m(1)]
    E["--", "--"] = [_m(1)]
    E["+0", "+0"] = [_m(-1, P(0, 1, 1.5), P(0, 1, -0.5), P(0, 1, 0.5, -2), *u_u1)]
    E["+0", "0+"] = [_m(1, P(1, 1, 0.5), one, P(0, 1, 0.5, -1), B(1, 0, 1, -1))]
    E["0+", "+0"] = [_m(1, P(1, -1, -0.5), one, P(0, -1, -0.5, -1), B(1, 0, 1, -1))]
    E["0+", "0+"] = [_m(-1, *u_u1)]
    E["-0", "-0"] = [_m(-1, *u_u1)]
    E["0-", "0-"] = [_m(-1, P(0, 1, 0.5), P(0, 1, -1.5), P(0, 1, -0.5, -2), *u_u1)]
    E["0-", "-0"] = [_m(1, P(1, 1, -0.5), one, P(0, 1, -0.5, -1), B(1, 0, 1, -1))]
    E["-0", "0-"] = [_m(1, P(1, -1, 0.5), one, P(0, -1, 0.5, -1), B(1, 0, 1, -1))]
    tail = (one, B(1, 0, 0), B(1, 0, 1, -1), B(1, 0, 1.5, -1))  # [1][u]/([1+u][u+3/2])
    E["+-", "+-"] = [_mul(_mul(Gp, Gm), _m(1, B(1, 0, 0.5), B(1, 0, 0), B(1, 0, 1.5, -1),
                                           B(1, 0, 1, -1)))]
    E["+-", "00"] = [_mul(Gm, _m(-1, P(0, 1, 0.5), P(-1, -1, -1), P(0, -1, 0.5, -2), *tail))]
    E["+-", "-+"] = [_m(1, B(-1, -2, 1), one, B(0, -2, 1, -1), B(1, 0, 1, -1)),
                     _mul(Gm, _m(-1, B(-1, -2, -0.5), B(0, -2, 1, -1), *tail[:3],
                                 B(1, 0, 1.5, -1)))]
    E["00", "-+"] = [_m(-1, P(-1, -1, -1), P(0, 1, 0.5, -1), *tail)]
    E["-+", "-+"] = [_m(1, B(1, 0, 0.5), B(1, 0, 0), B(1, 0, 1.5, -1), B(1, 0, 1, -1))]
    E["-+", "00"] = [_m(-1, P(-1, 1, -1), P(0, -1, 0.5, -1), *tail)]
    E["-+", "+-"] = [_m(1, B(-1, 2, 1), one, B(0, 2, 1, -1), B(1, 0, 1, -1)),
                     _mul(Gp, _m(-1, B(-1, 2, -0.5), B(0, 2, 1, -1), *tail[:3],
                                 B(1, 0, 1.5, -1)))]
    E["00", "+-"] = [_mul(Gp, _m(-1, P(0, -1, 0.5), P(-1, 1, -1), P(0, 1, 0.5, -2), *tail))]
    E["00", "00"] = ([_m(1, B(1, 0, 3), one, B(-1, 0, 1.5), B(0, 0, 3, -1), B(1, 0, 1, -1),
                         B(1, 0, 1.5, -1))]
                     + _sum_mul(H, [_m(1, one, B(1, 0, 0), B(0, 0, 3, -1), B(1, 0, 1, -1))]))
    return E


ENTRIES = _entries()  # (lower pair = row, upper pair = column) -> monomial list


def _bracket_kind(plus: bool, starred: bool) -> BracketKind:
    if starred:
        return BracketKind.STAR_PLUS if plus else BracketKind.STAR
    return BracketKind.PLUS if plus else BracketKind.PLAIN


def _eval_entry(monos, u, s, ctx, starred, cache):
    total = 0j
    for coef, factors in monos:
        val = complex(coef)
        for f, k in factors:
            key = f
            if key not in cache:
                cache[key] = bracket(f.au * u + f.as_ * s + f.c, _bracket_kind(f.plus, starred), ctx)
            b = cache[key]
            if k < 0 and abs(b) < POLE_EPS:
                raise PoleError(f"bracket {f} in R-matrix denominator", b)
            val *= b**k
        total += val
    return total


@dataclass
class RMatrixSample:
    u: complex
    s: complex
    entries: np.ndarray
    starred: bool = False
    basis: tuple = field(default=BASIS)

    def __getitem__(self, key):
        lo, up = key
        return self.entries[index(lo), index(up)]

    def dump(self) -> str:
        """Row-major text records 'i j re im'."""
        lines = []
        for i in range(9):
            for j in range(9):
                v = self.entries[i, j]
                lines.append(f"{i} {j} {v.real:.17g} {v.imag:.17g}")
        return "\n".join(lines)


def rbar(u, s, ctx: EllipticContext, starred: bool = False) -> RMatrixSample:
    M = np.zeros((9, 9), dtype=complex)
    cache: dict = {}
    for (lo, up), monos in ENTRIES.items():
        M[index(lo), index(up)] = _eval_entry(monos, u, s, ctx, starred, cache)
    return RMatrixSample(u, s, M, starred)


def r_plus(u, s, ctx: EllipticContext, starred: bool = False) -> RMatrixSample:
    R = rbar(u, s, ctx, starred)
    R.entries = rho_plus(u, ctx, starred) * R.entries
    return R


def structural_mask() -> np.ndarray:
    """True where weight conservation allows a nonzero entry."""
    mask = np.zeros((9, 9), dtype=bool)
    for i, a in enumerate(BASIS):
        for j, b in enumerate(BASIS):
            wa = sum(WEIGHTS[LABELS.index(x)] for x in a)
            wb = sum(WEIGHTS[LABELS.index(x)] for x in b)
            mask[i, j] = wa == wb
    return mask


def permutation_matrix() -> np.ndarray:
    Pm = np.zeros((9, 9))
    for i, a in enumerate(BASIS):
        Pm[i, index(a[::-1])] = 1
    return Pm


# ---------------------------------------------------------------------------
# trigonometric R-matrix


def trig_entries(z, q):
    d12 = (1 - q**2 * z)
    d13 = d12 * (1 - q**3 * z)
    if abs(d13) < POLE_EPS:
        raise PoleError("1 - q^2 z or 1 - q^3 z", d13)
    return {
        "b": -q * (1 - z) / d12,
        "c": (1 - q**2) / d12,
        "d": (1 - z) * q**2 * (1 - q * z) / d13,
        "e": 1j * (1 - q**2) * math.sqrt(q) * (1 - z) / d13,
        "f": (1 - q**2) * (1 + q - q**3 * z - q * z) / d13,
        "j": -q * (1 - z) / d12 + (1 - q**2) * (1 - q**3) * z / d13,
        "n": (1 - q**2) * (1 + q**2 - q**3 * z - q**2 * z) / d13,
    }


def rho_vv(z, q):
    t = q**6

    def P_(x):
        return qpoch_raw(x, (t,), _trig_cutoff(q))

    num = P_(1 / z) * P_(q / z) * P_(q**5 / z) * P_(q**6 / z)
    den = P_(q**2 / z) * P_(q**3 / z) ** 2 * P_(q**4 / z)
    if abs(den) < POLE_EPS:
        raise PoleError("rho_VV denominator", den)
    return num / (q * den)


def _trig_cutoff(q):
    return min(int(math.ceil(math.log(1e-18) / math.log(q**6))) + 4, 512)


def trig_rbar_vv(z, q) -> np.ndarray:
    e = trig_entries(z, q)
    M = np.zeros((9, 9), dtype=complex)
    M[0, 0] = M[8, 8] = 1
    M[1, 1] = M[3, 3] = M[5, 5] = M[7, 7] = e["b"]
    M[1, 3] = M[5, 7] = e["c"]
    M[3, 1] = M[7, 5] = z * e["c"]
    M[2, 2] = M[6, 6] = e["d"]
    M[2, 4] = M[4, 6] = e["e"]
    M[2, 6] = e["f"]
    M[4, 2] = M[6, 4] = -(q**2) * z * e["e"]
    M[4, 4] = e["j"]
    M[6, 2] = z * e["n"]
    return M


def trig_r_vv(z, q) -> np.ndarray:
    return rho_vv(z, q) * trig_rbar_vv(z, q)


# ---------------------------------------------------------------------------
# sampling helpers


def _sample_us(rng, ctx, n, re=1.0):
    im = min(1.0, abs((ctx.r * ctx.tau).imag) / 4)
    return rng.uniform(-re, re, n) + 1j * rng.uniform(-im, im, n) * 0.5


def _sample_s(rng, n, lo=-1.5, hi=1.5):
    """s away from the half-integer lattice by at least 0.05 (real part)."""
    out = []
    while len(out) < n:
        s = rng.uniform(lo, hi)
        if abs(s * 2 - round(s * 2)) / 2 >= 0.05:
            out.append(s + 1j * rng.uniform(-0.2, 0.2))
    return np.array(out)


def _params(ctx, **extra):
    d = {"q": ctx.q, "r": ctx.r, "c": ctx.c, "cutoff": ctx.cutoff}
    d.update(extra)
    return d


# ---------------------------------------------------------------------------
# checks


def check_rbar_permutation(ctx: EllipticContext, n_samples: int = 20, seed: int = 0,
                           tol: float = 1e-12) -> CheckReport:
    rng = rng_for(seed, "rmatrix.rbar_permutation")
    Pm = permutation_matrix()
    mask = structural_mask()
    worst, zeros_ok = 0.0, True
    for s in _sample_s(rng, n_samples):
        M = rbar(0.0, s, ctx).entries
        worst = max(worst, float(np.max(np.abs(M - Pm))))
        zeros_ok &= bool(np.all(M[~mask] == 0))
    return CheckReport("rmatrix.rbar_permutation", "Rbar(0,s) = P; weight-conserving zero pattern",
                       _params(ctx), n_samples, worst if zeros_ok else math.inf, tol,
                       notes={"structural_zeros_exact": zeros_ok})


def _block(M, a, b):
    i, j = index(a), index(b)
    return np.array([[M[i, i], M[i, j]], [M[j, i], M[j, j]]])


def solved_2x2_blocks(u, s, ctx: EllipticContext):
    """The two solved 2x2 blocks (upper index pair labels rows)."""
    def bp(x):
        return bracket(x, BracketKind.PLUS, ctx)

    def b(x):
        return bracket(x, BracketKind.PLAIN, ctx)

    ph = cmath.exp(1j * math.pi * u / ctx.r)
    uu = b(u) / b(u + 1)
    A = np.array([
        [-bp(s + 1.5) * bp(s - 0.5) / bp(s + 0.5) ** 2 * uu,
         ph * b(1) * bp(s + 0.5 - u) / (bp(s + 0.5) * b(u + 1))],
        [b(1) * bp(s + 0.5 + u) / (ph * bp(s + 0.5) * b(u + 1)), -uu]])
    C = np.array([
        [-bp(s - 1.5) * bp(s + 0.5) / bp(s - 0.5) ** 2 * uu,
         ph * b(1) * bp(s - 0.5 - u) / (bp(s - 0.5) * b(u + 1))],
        [b(1) * bp(s - 0.5 + u) / (ph * bp(s - 0.5) * b(u + 1)), -uu]])
    return A, C


def check_2x2_blocks(ctx: EllipticContext, n_samples: int = 50, seed: int = 0,
                     tol: float = 1e-10, gauge: bool = True) -> CheckReport:
    """Block = G M^T G^{-1} with G = diag(e^{pi i u/2r}, e^{-pi i u/2r}), M from Rbar."""
    rng = rng_for(seed, "rmatrix.2x2_blocks")
    us = _sample_us(rng, ctx, n_samples)
    ss = _sample_s(rng, n_samples)
    worst = 0.0
    for u, s in zip(us, ss):
        g = cmath.exp(1j * math.pi * u / (2 * ctx.r)) if gauge else 1.0
        G, Gi = np.diag([g, 1 / g]), np.diag([1 / g, g])
        M = rbar(u, s, ctx).entries
        A, C = solved_2x2_blocks(u, s, ctx)
        for blk, (a, b_) in ((A, ("+0", "0+")), (C, ("0-", "-0"))):
            pred = G @ _block(M, a, b_).T @ Gi
            worst = max(worst, rel_residual(pred, blk))
    return CheckReport("rmatrix.2x2_blocks", "solved 2x2 twistor blocks vs Rbar up to e^{+-pi i u/r} gauge",
                       _params(ctx, gauge=gauge), n_samples, worst, tol)


def _op(R_of_s, i, j, k, sig, cache):
    """27x27 operator: R acting on slots (i, j), s shifted by sig*wt(slot k)."""
    O = np.zeros((27, 27), dtype=complex)
    for st in itertools.product(range(3), repeat=3):
        shift = sig * WEIGHTS[st[k]] if k is not None else 0
        if shift not in cache:
            cache[shift] = R_of_s(shift)
        M = cache[shift]
        col = st[0] * 9 + st[1] * 3 + st[2]
        src = st[i] * 3 + st[j]
        for a in range(3):
            for b in range(3):
                v = M[a * 3 + b, src]
                if v != 0:
                    ns = list(st)
                    ns[i], ns[j] = a, b
                    O[ns[0] * 9 + ns[1] * 3 + ns[2], col] += v
    return O


def dybe_residual(ctx, sigma, u1, u2, u3, s, with_rho=False):
    f = r_plus if with_rho else rbar

    def R(u):
        return lambda sh: f(u, s + sh, ctx).entries

    lhs = (_op(R(u1 - u2), 0, 1, 2, sigma, {}) @ _op(R(u1 - u3), 0, 2, None, 0, {})
           @ _op(R(u2 - u3), 1, 2, 0, sigma, {}))
    rhs = (_op(R(u2 - u3), 1, 2, None, 0, {}) @ _op(R(u1 - u3), 0, 2, 1, sigma, {})
           @ _op(R(u1 - u2), 0, 1, None, 0, {}))
    scale = np.max(np.abs(lhs))
    return float(np.max(np.abs(lhs - rhs)) / scale)


SHIFT_CANDIDATES = (0.5, -0.5, 1.0, -1.0, 2.0, -2.0)


def check_dybe(ctx: EllipticContext, shift_convention: float | None = None, n_samples: int = 100,
               seed: int = 0, tol: float = 1e-9, with_rho: bool = False) -> CheckReport:
    """Dynamical YBE on C^3 x C^3 x C^3.

    With shift_convention None the candidate set is swept on a few samples
    first and the unique passing sigma is then run on the full sample set.
    """
    rng = rng_for(seed, "rmatrix.dybe")
    sweep = {}
    if shift_convention is None:
        probe = rng_for(seed, "rmatrix.dybe.sweep")
        pts = [(*_sample_us(probe, ctx, 3), _sample_s(probe, 1)[0]) for _ in range(3)]
        for sig in SHIFT_CANDIDATES:
            sweep[sig] = max(_safe_dybe(ctx, sig, *pt, with_rho) for pt in pts)
        passing = [sig for sig, v in sweep.items() if v < tol]
        sigma = passing[0] if len(passing) == 1 else math.nan
    else:
        sigma = shift_convention
    worst = 0.0
    done = 0
    if not math.isnan(sigma):
        while done < n_samples:
            u1, u2, u3 = _sample_us(rng, ctx, 3)
            s = _sample_s(rng, 1)[0]
            try:
                worst = max(worst, dybe_residual(ctx, sigma, u1, u2, u3, s, with_rho))
            except PoleError:
                continue
            done += 1
    else:
        worst = math.inf
    notes = {"sigma": sigma}
    if sweep:
        notes["sweep"] = {str(k): v for k, v in sweep.items()}
        notes["n_passing"] = sum(v < tol for v in sweep.values())
    return CheckReport("rmatrix.dybe" + ("_rho" if with_rho else ""),
                       "dynamical Yang-Baxter equation, s shifted by sigma*weight",
                       _params(ctx, sigma=sigma), done, worst, tol, notes=notes)


def _safe_dybe(ctx, sig, u1, u2, u3, s, with_rho):
    try:
        return dybe_residual(ctx, sig, u1, u2, u3, s, with_rho)
    except PoleError:
        return math.inf


# quasi-periodicity ---------------------------------------------------------


def _bracket_multiplier(x, k: int, r, tau):
    """[x + k r tau] / [x] for integer k.

    Both kinds pick up -e^{-pi i tau - 2 pi i x/r} per step; for [.]_+ this is
    what the product definition gives, sign included.
    """
    m = 1.0 + 0j
    step = 1 if k > 0 else -1
    for _ in range(abs(k)):
        if step > 0:
            f = cmath.exp(-1j * math.pi * tau - 2j * math.pi * x / r)
            x = x + r * tau
        else:
            x = x - r * tau
            f = 1 / cmath.exp(-1j * math.pi * tau - 2j * math.pi * x / r)
        m *= -f
    return m


def entry_multiplier(monos, u, s, du_periods, ds_periods, period: str, r, tau):
    """Predicted entry(u + du*L, s + ds*L) / entry(u, s) for L = r or r*tau.

    Each monomial gets its own multiplier; they must coincide for a sum."""
    mults = []
    for _coef, factors in monos:
        m = 1.0 + 0j
        for f, k in factors:
            shift = f.au * du_periods + f.as_ * ds_periods
            if period == "r":
                fm = 1.0 if f.plus else (-1.0) ** shift
            else:
                fm = _bracket_multiplier(f.au * u + f.as_ * s + f.c, int(shift), r, tau)
            m *= fm**k
        mults.append(m)
    return mults


def check_r_quasi_periodicity(ctx: EllipticContext, n_samples: int = 20, seed: int = 0,
                              tol: float = 1e-10) -> CheckReport:
    rng = rng_for(seed, "rmatrix.quasi_periodicity")
    r, tau = ctx.r, ctx.tau
    worst = 0.0
    cases = [("r", 1, 0), ("r", 0, 1), ("rtau", 1, 0)]
    for _ in range(n_samples):
        u = _sample_us(rng, ctx, 1, re=0.8)[0]
        s = _sample_s(rng, 1)[0]
        base = rbar(u, s, ctx)
        for period, du, ds in cases:
            L = r if period == "r" else r * tau
            shifted = rbar(u + du * L, s + ds * L, ctx)
            for (lo, up), monos in ENTRIES.items():
                mults = entry_multiplier(monos, u, s, du, ds, period, r, tau)
                pred = mults[0] * base[lo, up]
                spread = max(abs(m - mults[0]) for m in mults) / abs(mults[0])
                got = shifted[lo, up]
                scale = max(abs(got), abs(pred), 1e-300)
                worst = max(worst, abs(got - pred) / scale, spread)
    return CheckReport("rmatrix.quasi_periodicity", "entrywise multipliers composed from bracket laws",
                       _params(ctx), n_samples, worst, tol)
