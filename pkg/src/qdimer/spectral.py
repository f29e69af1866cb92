"""Three-term-recurrence spectral solver for the dimer tridiagonal matrices.

The characteristic polynomials p_k of the leading k x k minors satisfy

    p_{k+1}(x) = (x - d_k) p_k(x) - o_{k-1}^2 p_{k-1}(x),  p_-1 = 0, p_0 = 1,

and form a Sturm sequence: the number of sign agreements between consecutive
terms (an exact zero counts as sign-opposite to its predecessor) equals the
number of eigenvalues below x.  Bisection on that count inside Gershgorin
brackets yields every eigenvalue; the same recurrence evaluated at a root
gives the eigenvector components c_k = p_k / eps_k, where eps_k is the
running product of off-diagonal entries.  Recurrence values grow
combinatorially, so all evaluations carry a power-of-two rescaling or work
in the log domain.

Where the spectrum clusters (the strong-nonlinearity regime packs level
pairs exponentially tightly) eigenvector directions from the forward
recurrence degrade, so the solver repairs such columns by shifted inverse
iteration and a final orthogonalization pass; the method used per column is
recorded.  The verification routines can escalate to arbitrary-precision
bisection when double precision cannot resolve the level spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
import scipy.linalg

from .dimer import TridiagonalHamiltonian
from .qnumbers import Q_ONE_THRESHOLD, q_from_gamma

# Rescaling window for recurrence values, as powers of two.
_SCALE_BITS = 512
_SCALE_HI = 2.0**_SCALE_BITS
_SCALE_LO = 2.0**-_SCALE_BITS

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SturmEvaluation:
    """One recurrence sweep at lam: final value (times 2^log_scale) and the
    count of eigenvalues below lam."""

    lam: float
    value: float
    log_scale: int
    sign_changes: int


@dataclass
class Spectrum:
    """Converged eigensystem of a dimer Hamiltonian.

    Eigenvalues ascend; vectors[:, a] is the unit eigenvector for
    eigenvalues[a] with its first significant component positive.
    norm_constants[a] is 1 / sqrt(sum_k p_k(lam_a)^2 / eps_k^2), the
    normalization of the recurrence eigenvector expansion.
    vector_method[a] records how the column was obtained.
    """

    hamiltonian: TridiagonalHamiltonian
    eigenvalues: np.ndarray
    vectors: np.ndarray
    norm_constants: np.ndarray
    epsilon_factors: np.ndarray
    vector_method: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def gershgorin_bounds(H: TridiagonalHamiltonian) -> tuple[float, float]:
    """Inclusive interval containing the whole spectrum."""
    d, off = H.diag, H.off
    r = np.zeros(H.dim)
    if off.size:
        r[:-1] += np.abs(off)
        r[1:] += np.abs(off)
    return float(np.min(d - r)), float(np.max(d + r))


def _radius(H) -> float:
    lo, hi = gershgorin_bounds(H)
    return max(abs(lo), abs(hi))


def sturm_eval(H: TridiagonalHamiltonian, lam: float) -> SturmEvaluation:
    """Run the minor recurrence at lam with power-of-two rescaling.

    The true p_dim(lam) equals value * 2^log_scale; sign_changes counts
    eigenvalues strictly below lam.
    """
    if not math.isfinite(lam):
        raise ValueError(f"lam must be finite, got {lam}")
    d, off = H.diag, H.off
    p_prev, p = 0.0, 1.0
    s_prev = 1
    count = 0
    log_scale = 0
    for k in range(H.dim):
        o2 = off[k - 1] * off[k - 1] if k > 0 else 0.0
        p_new = (lam - d[k]) * p - o2 * p_prev
        mag = abs(p_new)
        if mag > _SCALE_HI or (0.0 < mag < _SCALE_LO):
            _, e = math.frexp(p_new)
            p_new = math.ldexp(p_new, -e)
            p = math.ldexp(p, -e)
            log_scale += e
        s = 0 if p_new == 0.0 else (1 if p_new > 0.0 else -1)
        if s == 0:
            s = -s_prev
        if s == s_prev:
            count += 1
        p_prev, p, s_prev = p, p_new, s
    return SturmEvaluation(lam=float(lam), value=p, log_scale=log_scale, sign_changes=count)


def characteristic_coefficients(H: TridiagonalHamiltonian) -> list:
    """Coefficient arrays of the minor polynomials p_0 .. p_dim.

    Entry k holds the coefficients of p_k in ascending powers, built by the
    same three-term recurrence acting on coefficient vectors (multiply by x
    is a shift).  Coefficients grow combinatorially, so this is a
    desk-scale cross-check of degrees and parity, not a solver path.
    """
    d, off = H.diag, H.off
    polys = [np.array([1.0])]
    prev = np.zeros(1)
    for k in range(H.dim):
        p = polys[-1]
        shifted = np.concatenate(([0.0], p))
        cur = shifted.copy()
        cur[: p.size] -= d[k] * p
        if k > 0:
            cur[: prev.size] -= off[k - 1] * off[k - 1] * prev
        prev = p
        polys.append(cur)
    return polys


def _count_below_batch(d, off2, lams):
    """Vectorized Sturm count over an array of evaluation points."""
    lams = np.asarray(lams, dtype=float)
    p_prev = np.zeros_like(lams)
    p = np.ones_like(lams)
    s_prev = np.ones(lams.shape, dtype=np.int8)
    count = np.zeros(lams.shape, dtype=np.int64)
    n = d.shape[0]
    for k in range(n):
        o2 = off2[k - 1] if k > 0 else 0.0
        p_new = (lams - d[k]) * p - o2 * p_prev
        s = np.sign(p_new).astype(np.int8)
        if (s == 0).any():
            s = np.where(s == 0, -s_prev, s).astype(np.int8)
        count += s == s_prev
        p_prev = p
        p = p_new
        s_prev = s
        # Blocked renormalization: between visits the values can grow by a
        # bounded number of bits, so scaling the pair into [0.5, 1) every
        # few steps keeps the sweep inside double range.
        if (k & 7) == 7:
            e = np.maximum(np.frexp(p)[1], np.frexp(p_prev)[1])
            p = np.ldexp(p, -e)
            p_prev = np.ldexp(p_prev, -e)
    return count


def eigenvalues_bisection(H: TridiagonalHamiltonian, tol: float = 1e-12) -> np.ndarray:
    """All eigenvalues by bisection on the Sturm count, ascending.

    Each eigenvalue is bracketed to width <= tol * max(1, spectral radius)
    starting from the Gershgorin interval.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    d, off = H.diag, H.off
    dim = H.dim
    if dim == 1:
        return d.copy()
    off2 = off * off
    glo, ghi = gershgorin_bounds(H)
    radius = max(abs(glo), abs(ghi), 1.0)
    pad = 1e-3 * radius
    lo = np.full(dim, glo - pad)
    hi = np.full(dim, ghi + pad)
    idx = np.arange(dim)
    for _ in range(4096):
        mid = 0.5 * (lo + hi)
        below = _count_below_batch(d, off2, mid) <= idx
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        # per-eigenvalue target: small-magnitude roots of a wide spectrum
        # are bisected further than the global tol * radius width
        target = np.maximum(
            tol * np.maximum(1.0, np.abs(mid)),
            4.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi)),
        )
        if np.all(hi - lo <= target):
            break
    return np.sort(0.5 * (lo + hi))


def epsilon_factors(two_j: int, model: str, gamma: float = 0.0, log: bool = False) -> np.ndarray:
    """Normalization weights eps_k of the recurrence eigenvector expansion.

    eps_k is the product of the first k off-diagonal couplings at unit
    hopping: sqrt(k! prod_{i<k}(2j - i)) for the nonlinear dimer and the
    same with symmetric q-numbers for the deformed one; eps_0 = 1.  The
    products overflow doubles for large sectors, so log=True returns
    log(eps_k) instead; the linear form raises once any factor exceeds
    double range.
    """
    if two_j < 0 or int(two_j) != two_j:
        raise ValueError(f"two_j must be a nonnegative integer, got {two_j}")
    if model not in ("dnls", "al"):
        raise ValueError(f"model must be 'dnls' or 'al', got {model!r}")
    if model == "al":
        q = q_from_gamma(gamma).q
        logs = [_log_sym_qnum(i, q) for i in range(1, two_j + 1)]
        log_off = [0.5 * (logs[two_j - 1 - k] + logs[k]) for k in range(two_j)]
    else:
        log_off = [
            0.5 * (math.log(two_j - k) + math.log(k + 1)) for k in range(two_j)
        ]
    out = np.zeros(two_j + 1)
    out[1:] = np.cumsum(log_off)
    if log:
        return out
    if out.size and float(np.max(out)) > 700.0:
        raise OverflowError(
            "epsilon factors overflow double precision; pass log=True"
        )
    return np.exp(out)


def _log_sym_qnum(x: float, q: float) -> float:
    """log [x] for x > 0, stable for large x where [x] itself overflows."""
    if abs(q - 1.0) < Q_ONE_THRESHOLD:
        return math.log(x)
    s = abs(math.log(q))
    return x * s + math.log1p(-math.exp(-2.0 * x * s)) - math.log(math.exp(s) - math.exp(-s))


def _recurrence_log_table(d, off, lam):
    """Signs and natural logs of p_k(lam), k = 0..dim-1, plus the log and
    sign of the running off-diagonal products eps_k."""
    dim = d.shape[0]
    sgn_p = np.zeros(dim)
    log_p = np.full(dim, -np.inf)
    sgn_p[0], log_p[0] = 1.0, 0.0
    p_prev, p = 0.0, 1.0
    scale_bits = 0
    ln2 = math.log(2.0)
    for k in range(1, dim):
        o2 = off[k - 2] * off[k - 2] if k > 1 else 0.0
        p_new = (lam - d[k - 1]) * p - o2 * p_prev
        mag = abs(p_new)
        if mag > _SCALE_HI or (0.0 < mag < _SCALE_LO):
            _, e = math.frexp(p_new)
            p_new = math.ldexp(p_new, -e)
            p = math.ldexp(p, -e)
            scale_bits += e
        p_prev, p = p, p_new
        if p != 0.0:
            sgn_p[k] = math.copysign(1.0, p)
            log_p[k] = math.log(abs(p)) + scale_bits * ln2
    sgn_eps = np.ones(dim)
    log_eps = np.zeros(dim)
    for k in range(1, dim):
        o = off[k - 1]
        sgn_eps[k] = sgn_eps[k - 1] * (1.0 if o >= 0.0 else -1.0)
        log_eps[k] = log_eps[k - 1] + math.log(abs(o))
    return sgn_p, log_p, sgn_eps, log_eps


def _recurrence_vector(H, lam):
    """Normalized recurrence eigenvector and its normalization constant."""
    sgn_p, log_p, sgn_eps, log_eps = _recurrence_log_table(H.diag, H.off, lam)
    log_c = log_p - log_eps
    peak = float(np.max(log_c))
    c = sgn_p * sgn_eps * np.exp(log_c - peak)
    nrm = float(np.linalg.norm(c))
    c /= nrm
    # norm constant 1/sqrt(sum p^2/eps^2) in the log domain
    log_norm2 = peak + math.log(nrm)
    norm_constant = math.exp(-log_norm2) if log_norm2 < 700.0 else 0.0
    return _fix_sign(c), norm_constant


def _fix_sign(c):
    anchor = np.abs(c) > 1e-12 * np.max(np.abs(c))
    first = int(np.argmax(anchor))
    if c[first] < 0.0:
        return -c
    return c


def _residual(H, lam, c):
    d, off = H.diag, H.off
    hv = d * c
    if off.size:
        hv[:-1] += off * c[1:]
        hv[1:] += off * c[:-1]
    return float(np.max(np.abs(hv - lam * c)))


def eigenvector_from_recurrence(H: TridiagonalHamiltonian, lam: float):
    """Eigenvector components c_k = p_k(lam)/eps_k, unit norm, and the
    normalization constant of the expansion.

    lam must be a converged eigenvalue; if the assembled vector fails the
    residual test the input was not an eigenvalue and a ValueError is
    raised.
    """
    c, norm_constant = _recurrence_vector(H, lam)
    res = _residual(H, lam, c)
    if res > 1e-6 * max(1.0, _radius(H)):
        raise ValueError(
            f"lam={lam} is not an eigenvalue (residual {res:.3e})"
        )
    return c, norm_constant


def _inverse_iteration(H, lam, prior, col):
    """Shifted inverse iteration, orthogonalized against prior columns."""
    d, off = H.diag, H.off
    dim = H.dim
    radius = _radius(H)
    shift = lam + 10.0 * _EPS * max(1.0, radius)
    ab = np.zeros((3, dim))
    ab[1] = d - shift
    if off.size:
        ab[0, 1:] = off
        ab[2, :-1] = off
    rng = np.random.default_rng([991, dim, col])
    x = rng.standard_normal(dim)
    for v in prior:
        x -= (v @ x) * v
    x /= np.linalg.norm(x)
    for _ in range(3):
        try:
            y = scipy.linalg.solve_banded((1, 1), ab, x)
        except np.linalg.LinAlgError:
            ab[1] += 100.0 * _EPS * max(1.0, radius)
            y = scipy.linalg.solve_banded((1, 1), ab, x)
        for v in prior:
            y -= (v @ y) * v
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            y = rng.standard_normal(dim)
            nrm = np.linalg.norm(y)
        x = y / nrm
    return _fix_sign(x)


def solve_spectrum(H: TridiagonalHamiltonian, tol: float = 1e-12) -> Spectrum:
    """Full eigensystem via Sturm bisection plus recurrence eigenvectors.

    Columns whose eigenvalue sits closer to a neighbour than the forward
    recurrence can resolve are recomputed by inverse iteration, and a final
    orthogonalization sweep makes the vector set orthonormal even where
    level pairs collapse to machine precision.
    """
    evs = eigenvalues_bisection(H, tol)
    dim = H.dim
    radius = max(1.0, _radius(H))
    vectors = np.empty((dim, dim))
    norm_constants = np.empty(dim)
    methods = ["recurrence"] * dim
    repair_gap = 1e-6 * radius
    res_tol = max(0.5e-10, 100.0 * _EPS * radius)
    for a in range(dim):
        c, nc = _recurrence_vector(H, evs[a])
        vectors[:, a] = c
        norm_constants[a] = nc
    # repair clusters: walk runs of eigenvalues tighter than repair_gap
    a = 0
    while a < dim:
        b = a
        while b + 1 < dim and evs[b + 1] - evs[b] <= repair_gap:
            b += 1
        cluster = list(range(a, b + 1))
        needs_repair = len(cluster) > 1 or _residual(H, evs[a], vectors[:, a]) > res_tol
        if needs_repair:
            prior = []
            for col in cluster:
                v = _inverse_iteration(H, evs[col], prior, col)
                vectors[:, col] = v
                prior.append(v)
                methods[col] = "inverse_iteration"
        a = b + 1
    # final orthogonalization: overlaps between resolved columns are tiny,
    # so this perturbs residuals by at most the eigenvalue error
    for a in range(dim):
        v = vectors[:, a]
        for b in range(a):
            v -= (vectors[:, b] @ v) * vectors[:, b]
        vectors[:, a] = _fix_sign(v / np.linalg.norm(v))
    eps = _off_products(H)
    return Spectrum(
        hamiltonian=H,
        eigenvalues=evs,
        vectors=vectors,
        norm_constants=norm_constants,
        epsilon_factors=eps,
        vector_method=methods,
    )


def _off_products(H):
    out = np.ones(H.dim)
    if H.dim > 1:
        with np.errstate(over="ignore"):
            out[1:] = np.cumprod(H.off)
    return out


def dense_oracle(H: TridiagonalHamiltonian) -> Spectrum:
    """Independent eigensystem from the library tridiagonal QR/QL solver."""
    if H.dim == 1:
        w = H.diag.copy()
        v = np.ones((1, 1))
    else:
        w, v = scipy.linalg.eigh_tridiagonal(H.diag, H.off)
    order = np.argsort(w)
    w = w[order]
    v = v[:, order]
    for a in range(H.dim):
        v[:, a] = _fix_sign(v[:, a])
    return Spectrum(
        hamiltonian=H,
        eigenvalues=w,
        vectors=v,
        norm_constants=np.abs(v[0, :]),
        epsilon_factors=_off_products(H),
        vector_method=["dense"] * H.dim,
    )


# ---------------------------------------------------------------------------
# verification: orthonormality, completeness, parity
# ---------------------------------------------------------------------------


def df_orthonormality_check(spectrum: Spectrum, digits: int | None = None) -> float:
    """Max residual of the discrete orthogonality of the recurrence columns.

    The kernel identity for the minor polynomials states that the weighted
    columns (p_k(lam_a)/eps_k), normalized per root, form an orthonormal
    family over the roots.  Returns max |Gram - I|.

    With digits=None the check runs in double precision while the level
    spacing is resolvable and escalates to arbitrary-precision root
    refinement when it is not (clustered strong-coupling spectra); an
    explicit digits forces that precision.
    """
    H = spectrum.hamiltonian
    if digits is None:
        gaps = np.diff(spectrum.eigenvalues)
        resolvable = gaps.size == 0 or float(np.min(gaps)) > 1e-5 * max(1.0, _radius(H))
        if resolvable:
            return _df_gram_float(H, spectrum.eigenvalues)
        return _df_gram_mp(H)
    if digits <= 0:
        return _df_gram_float(H, spectrum.eigenvalues)
    return _df_gram_mp(H, digits)


def _df_gram_float(H, evs):
    dim = H.dim
    cols = np.empty((dim, dim))
    for a in range(dim):
        c, _ = _recurrence_vector(H, evs[a])
        cols[:, a] = c
    gram = cols.T @ cols
    return float(np.max(np.abs(gram - np.eye(dim))))


def _mp_count_below(d, off2, lam, dim):
    p_prev, p = mp.mpf(0), mp.mpf(1)
    s_prev, count = 1, 0
    for k in range(dim):
        p_new = (lam - d[k]) * p - (off2[k - 1] if k > 0 else 0) * p_prev
        s = 1 if p_new > 0 else (-1 if p_new < 0 else -s_prev)
        if s == s_prev:
            count += 1
        p_prev, p, s_prev = p, p_new, s
    return count


def _mp_eigenvalues(H, dps):
    """All roots by Sturm bisection in mpmath working precision dps."""
    dim = H.dim
    with mp.workdps(dps):
        d = [mp.mpf(x) for x in H.diag]
        off = [mp.mpf(x) for x in H.off]
        off2 = [o * o for o in off]
        glo, ghi = gershgorin_bounds(H)
        radius = max(abs(glo), abs(ghi), 1.0)
        pad = mp.mpf(radius) * mp.mpf("1e-3")
        target = mp.mpf(radius) * mp.mpf(10) ** (-(dps - 6))
        roots = []
        for i in range(dim):
            lo, hi = mp.mpf(glo) - pad, mp.mpf(ghi) + pad
            while hi - lo > target:
                mid = (lo + hi) / 2
                if _mp_count_below(d, off2, mid, dim) <= i:
                    lo = mid
                else:
                    hi = mid
            roots.append((lo + hi) / 2)
    return roots


def _df_gram_mp(H, digits: int | None = None):
    """Gram residual with roots refined beyond double precision.

    Precision deepens until adjacent roots are separated by the working
    tolerance, so the identity is checked for the exact spectrum of the
    stored double-precision matrix.
    """
    dim = H.dim
    dps = digits if digits else 40
    for _ in range(6):
        roots = _mp_eigenvalues(H, dps)
        with mp.workdps(dps):
            sep = min(
                (roots[i + 1] - roots[i] for i in range(dim - 1)),
                default=mp.mpf(1),
            )
            resolved = sep > max(1.0, _radius(H)) * mp.mpf(10) ** (-(dps - 14))
            if resolved or digits:
                d = [mp.mpf(x) for x in H.diag]
                off = [mp.mpf(x) for x in H.off]
                cols = []
                for lam in roots:
                    p_prev, p = mp.mpf(0), mp.mpf(1)
                    col = [p]
                    for k in range(1, dim):
                        o2 = off[k - 2] * off[k - 2] if k > 1 else 0
                        p_new = (lam - d[k - 1]) * p - o2 * p_prev
                        p_prev, p = p, p_new
                        col.append(p)
                    eps = mp.mpf(1)
                    weighted = [col[0]]
                    for k in range(1, dim):
                        eps = eps * off[k - 1]
                        weighted.append(col[k] / eps)
                    nrm = mp.sqrt(mp.fsum(w * w for w in weighted))
                    cols.append([w / nrm for w in weighted])
                worst = mp.mpf(0)
                for i in range(dim):
                    for jx in range(i, dim):
                        g = mp.fsum(cols[i][k] * cols[jx][k] for k in range(dim))
                        tgt = 1 if i == jx else 0
                        worst = max(worst, abs(g - tgt))
                return float(worst)
        dps *= 2
        if dps > 320:
            raise RuntimeError("level spacing unresolved at 320 digits")
    raise RuntimeError("precision escalation failed")


def completeness_check(spectrum: Spectrum) -> float:
    """Max residual of sum_a |psi_a><psi_a| = 1 over the eigenvector set."""
    v = spectrum.vectors
    return float(np.max(np.abs(v @ v.T - np.eye(spectrum.dim))))


@dataclass(frozen=True)
class ParityReport:
    """Outcome of the symmetric-spectrum structure check."""

    max_pair_residual: float
    zero_count: int
    expected_zero_count: int
    min_abs_eigenvalue: float
    offending_pairs: tuple
    passed: bool


def parity_structure_check(spectrum: Spectrum, tol: float = 1e-10) -> ParityReport:
    """Check the deformed-dimer spectrum is symmetric under lam -> -lam and
    that a zero eigenvalue occurs exactly for odd dimension (integer spin)."""
    if spectrum.hamiltonian.model != "al":
        raise ValueError("parity structure applies to the 'al' model only")
    evs = spectrum.eigenvalues
    dim = evs.size
    pair_res = np.abs(evs + evs[::-1])
    offending = tuple(int(i) for i in np.nonzero(pair_res > tol)[0])
    zero_count = int(np.count_nonzero(np.abs(evs) <= tol))
    expected = 1 if dim % 2 == 1 else 0
    passed = not offending and zero_count == expected
    return ParityReport(
        max_pair_residual=float(np.max(pair_res)) if dim else 0.0,
        zero_count=zero_count,
        expected_zero_count=expected,
        min_abs_eigenvalue=float(np.min(np.abs(evs))) if dim else 0.0,
        offending_pairs=offending,
        passed=passed,
    )
