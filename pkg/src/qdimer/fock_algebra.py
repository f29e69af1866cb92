"""Fixed-quanta Fock sectors, boson and q-boson hopping algebra on them.

A sector is the span of all occupation states of n_sites lattice modes with
a fixed total number of quanta M.  Hopping operators a_i' a_j preserve M, so
every operator here is a plain dense matrix on one sector.  The nearest
neighbour hops realize the Chevalley generators of su(n_sites), and their
q-deformed counterparts (matrix elements built from symmetric q-numbers)
realize su_q(n_sites).  The module also provides the deformed lattice
oscillator on a truncated single-mode space, Casimir invariants, and the
linear map reconstructing the mode numbers N_i from the Cartan generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qnumbers import Q_ONE_THRESHOLD, basic_qnum, q_binomial, sym_qnum

MAX_SECTOR_DIM = 1_000_000


class FockSectorBasis:
    """Occupation basis of the (n_sites, total_quanta) sector.

    States are tuples (n_1, ..., n_sites) with sum(n) = total_quanta, listed
    in ascending lexicographic order so the layout is reproducible.
    """

    def __init__(self, n_sites: int, total_quanta: int):
        if n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {n_sites}")
        if total_quanta < 0:
            raise ValueError(f"total_quanta must be >= 0, got {total_quanta}")
        dim = math.comb(total_quanta + n_sites - 1, n_sites - 1)
        if dim > MAX_SECTOR_DIM:
            raise ValueError(
                f"sector dimension {dim} exceeds the size guard {MAX_SECTOR_DIM}"
            )
        self.n_sites = n_sites
        self.total_quanta = total_quanta
        self.states = tuple(sorted(_compositions(n_sites, total_quanta)))
        self.index = {s: k for k, s in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def __repr__(self):
        return (
            f"FockSectorBasis(n_sites={self.n_sites}, "
            f"total_quanta={self.total_quanta}, dim={self.dim})"
        )


def _compositions(n_sites, total):
    if n_sites == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(n_sites - 1, total - first):
            yield (first,) + rest


def build_sector_basis(n_sites: int, total_quanta: int) -> FockSectorBasis:
    """Enumerate the fixed-quanta occupation basis; dim = C(M+n-1, n-1)."""
    return FockSectorBasis(n_sites, total_quanta)


@dataclass
class SectorOperator:
    """A dense real matrix acting on one fixed-quanta sector."""

    basis: FockSectorBasis
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.shape != (self.basis.dim, self.basis.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match sector dim {self.basis.dim}"
            )


def _site_range_check(basis, *sites):
    for s in sites:
        if not 1 <= s <= basis.n_sites:
            raise ValueError(f"site index {s} outside 1..{basis.n_sites}")


def number_operator(basis: FockSectorBasis, i: int) -> SectorOperator:
    """Diagonal mode-occupation operator N_i (1-based site index)."""
    _site_range_check(basis, i)
    diag = np.array([s[i - 1] for s in basis.states], dtype=float)
    return SectorOperator(basis, np.diag(diag))


def hop_operator(basis: FockSectorBasis, i: int, j: int) -> SectorOperator:
    """Boson hop a_i' a_j with matrix elements sqrt(n_i + 1) sqrt(n_j)."""
    return _hop(basis, i, j, lambda ni, nj: math.sqrt((ni + 1) * nj))


def q_hop_operator(basis: FockSectorBasis, i: int, j: int, q: float) -> SectorOperator:
    """q-boson hop with matrix elements sqrt([n_i + 1] [n_j])."""
    return _hop(
        basis, i, j, lambda ni, nj: math.sqrt(sym_qnum(ni + 1, q) * sym_qnum(nj, q))
    )


def al_hop_operator(basis: FockSectorBasis, i: int, j: int, gamma: float) -> SectorOperator:
    """Deformed-lattice-oscillator hop b_i' b_j with elements sqrt({n_i+1} {n_j})."""
    return _hop(
        basis,
        i,
        j,
        lambda ni, nj: math.sqrt(basic_qnum(ni + 1, gamma) * basic_qnum(nj, gamma)),
    )


def _hop(basis, i, j, amplitude):
    _site_range_check(basis, i, j)
    if i == j:
        raise ValueError("hop requires distinct sites; use number_operator for i == j")
    mat = np.zeros((basis.dim, basis.dim))
    for col, s in enumerate(basis.states):
        if s[j - 1] == 0:
            continue
        t = list(s)
        t[i - 1] += 1
        t[j - 1] -= 1
        mat[basis.index[tuple(t)], col] = amplitude(s[i - 1], s[j - 1])
    return SectorOperator(basis, mat)


def cartan_matrix(n: int) -> np.ndarray:
    """A_{n-1} Cartan matrix: 2 on the diagonal, -1 on adjacent off-diagonals."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    a = 2 * np.eye(n - 1, dtype=int)
    for i in range(n - 2):
        a[i, i + 1] = a[i + 1, i] = -1
    return a


@dataclass
class ChevalleyGenerators:
    """Chevalley generators e_i, f_i, h_i on a sector, i = 1..n-1 (list slot i-1).

    For q != 1 the group-like k_i = q^h_i and the local sector weights
    C_i = q^((N_i + N_{i+1})/2) are also populated; both are diagonal.
    """

    n: int
    q: float
    basis: FockSectorBasis
    e: tuple
    f: tuple
    h: tuple
    k: tuple | None = None
    c_loc: tuple | None = None

    @property
    def rank(self) -> int:
        return self.n - 1


def su_n_generators(basis: FockSectorBasis) -> ChevalleyGenerators:
    """Boson realization e_i = a_i' a_{i+1}, f_i = e_i', h_i = (N_i - N_{i+1})/2."""
    if basis.n_sites < 2:
        raise ValueError("need at least two sites")
    e, f, h = [], [], []
    for i in range(1, basis.n_sites):
        ei = hop_operator(basis, i, i + 1)
        e.append(ei)
        f.append(SectorOperator(basis, ei.matrix.T.copy()))
        hi = 0.5 * (number_operator(basis, i).matrix - number_operator(basis, i + 1).matrix)
        h.append(SectorOperator(basis, hi))
    return ChevalleyGenerators(
        n=basis.n_sites, q=1.0, basis=basis, e=tuple(e), f=tuple(f), h=tuple(h)
    )


def suq_n_generators(basis: FockSectorBasis, q: float) -> ChevalleyGenerators:
    """q-boson realization of su_q(n) with symmetric q-number matrix elements."""
    if basis.n_sites < 2:
        raise ValueError("need at least two sites")
    if not q > 0.0:
        raise ValueError(f"q must be > 0, got {q}")
    e, f, h, k, c_loc = [], [], [], [], []
    for i in range(1, basis.n_sites):
        ei = q_hop_operator(basis, i, i + 1, q)
        e.append(ei)
        f.append(SectorOperator(basis, ei.matrix.T.copy()))
        ni = np.diag(number_operator(basis, i).matrix)
        nip = np.diag(number_operator(basis, i + 1).matrix)
        hdiag = 0.5 * (ni - nip)
        h.append(SectorOperator(basis, np.diag(hdiag)))
        k.append(SectorOperator(basis, np.diag(q**hdiag)))
        c_loc.append(SectorOperator(basis, np.diag(q ** (0.5 * (ni + nip)))))
    return ChevalleyGenerators(
        n=basis.n_sites,
        q=float(q),
        basis=basis,
        e=tuple(e),
        f=tuple(f),
        h=tuple(h),
        k=tuple(k),
        c_loc=tuple(c_loc),
    )


@dataclass
class ResidualReport:
    """Labelled max-norm residuals from an identity check."""

    entries: list = field(default_factory=list)
    dim: int = 0
    vacuous: bool = False

    def add(self, label, value):
        self.entries.append((label, float(value)))

    @property
    def max_residual(self) -> float:
        return max((v for _, v in self.entries), default=0.0)

    def ok(self, tol: float) -> bool:
        return all(v <= tol for _, v in self.entries)


def _maxabs(m):
    return float(np.max(np.abs(m))) if m.size else 0.0


def _comm(a, b):
    return a @ b - b @ a


def verify_chevalley(gens: ChevalleyGenerators) -> ResidualReport:
    """Residuals of the defining relations on the sector.

    q = 1:  [h_i,h_j] = 0, [h_i,e_j] = (a_ij/2) e_j, [h_i,f_j] = -(a_ij/2) f_j,
            [e_i,f_j] = 2 h_i delta_ij.
    q != 1: k_i k_j = k_j k_i, k_i e_j k_i^-1 = q^(a_ij/2) e_j (and inverse
            power for f_j), [e_i,f_j] = delta_ij [2 h_i].
    """
    rep = ResidualReport(dim=gens.basis.dim)
    a = cartan_matrix(gens.n)
    r = gens.rank
    deformed = abs(gens.q - 1.0) >= Q_ONE_THRESHOLD
    for i in range(r):
        for j in range(r):
            ei, fj = gens.e[i].matrix, gens.f[j].matrix
            ej = gens.e[j].matrix
            hi = gens.h[i].matrix
            if not deformed:
                hj = gens.h[j].matrix
                rep.add(f"[h{i+1},h{j+1}]", _maxabs(_comm(hi, hj)))
                rep.add(f"[h{i+1},e{j+1}]", _maxabs(_comm(hi, ej) - 0.5 * a[i, j] * ej))
                rep.add(f"[h{i+1},f{j+1}]", _maxabs(_comm(hi, fj) + 0.5 * a[i, j] * fj))
                target = 2.0 * hi if i == j else np.zeros_like(hi)
                rep.add(f"[e{i+1},f{j+1}]", _maxabs(_comm(ei, fj) - target))
            else:
                ki = np.diag(gens.k[i].matrix)
                kj = gens.k[j].matrix
                rep.add(f"k{i+1}k{j+1}", _maxabs(_comm(np.diag(ki), kj)))
                conj_e = (ki[:, None] * ej) / ki[None, :]
                rep.add(
                    f"k{i+1}e{j+1}k{i+1}^-1",
                    _maxabs(conj_e - gens.q ** (0.5 * a[i, j]) * ej),
                )
                conj_f = (ki[:, None] * fj) / ki[None, :]
                rep.add(
                    f"k{i+1}f{j+1}k{i+1}^-1",
                    _maxabs(conj_f - gens.q ** (-0.5 * a[i, j]) * fj),
                )
                if i == j:
                    target = np.diag(
                        [sym_qnum(2.0 * x, gens.q) for x in np.diag(gens.h[i].matrix)]
                    )
                else:
                    target = np.zeros_like(ei)
                rep.add(f"[e{i+1},f{j+1}]", _maxabs(_comm(ei, fj) - target))
    return rep


def verify_serre(gens: ChevalleyGenerators) -> ResidualReport:
    """Residuals of the (q-)Serre relations for every ordered pair i != j.

    sum_{r+s=1-a_ij} (-1)^r C_q(1-a_ij, r) x_i^r x_j x_i^s = 0 for x = e and
    x = f, with q-binomials (ordinary binomials at q = 1).  Vacuous for rank 1.
    """
    rep = ResidualReport(dim=gens.basis.dim)
    r = gens.rank
    if r < 2:
        rep.vacuous = True
        return rep
    a = cartan_matrix(gens.n)
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            order = 1 - a[i, j]
            for name, ops in (("e", gens.e), ("f", gens.f)):
                xi, xj = ops[i].matrix, ops[j].matrix
                acc = np.zeros_like(xi)
                for rr in range(order + 1):
                    ss = order - rr
                    coeff = (-1.0) ** rr * q_binomial(order, rr, gens.q)
                    acc += coeff * np.linalg.matrix_power(xi, rr) @ xj @ np.linalg.matrix_power(xi, ss)
                rep.add(f"serre_{name}{i+1}{name}{j+1}", _maxabs(acc))
    return rep


# ---------------------------------------------------------------------------
# deformed lattice oscillator on a truncated single-mode space
# ---------------------------------------------------------------------------


def al_oscillator_ops(n_max: int, gamma: float):
    """Truncated (n_max+1)-dim matrices (b, b', N) with b|n> = sqrt({n}) |n-1>."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    amps = np.array([math.sqrt(basic_qnum(n, gamma)) for n in range(1, n_max + 1)])
    b = np.diag(amps, 1)
    bd = b.T.copy()
    n_op = np.diag(np.arange(n_max + 1, dtype=float))
    return b, bd, n_op


def verify_al_relations(b, bd, n_op, gamma: float, n_max: int) -> ResidualReport:
    """Relative residuals of [b,b'] = 1 + (gamma/2) b'b and of the number map.

    The number map is N = ln(1 + (gamma/2) b'b) / ln(1 + gamma/2) for
    gamma > 0 and N = b'b in the linear limit.  Rows and columns at the
    truncation edge n = n_max are excluded, where b' leaks out of the space.
    """
    rep = ResidualReport(dim=n_max + 1)
    sub = slice(0, n_max)
    eye = np.eye(n_max + 1)
    occ = bd @ b
    ccr = _comm(b, bd) - (eye + 0.5 * gamma * occ)
    expected = eye + 0.5 * gamma * occ
    scale = max(1.0, _maxabs(expected[sub, sub]))
    rep.add("commutation", _maxabs(ccr[sub, sub]) / scale)
    if gamma > 0.0:
        recon = np.diag(np.log1p(0.5 * gamma * np.diag(occ)) / math.log1p(0.5 * gamma))
    else:
        recon = occ
    scale = max(1.0, _maxabs(n_op[sub, sub]))
    rep.add("number_map", _maxabs((n_op - recon)[sub, sub]) / scale)
    return rep


# ---------------------------------------------------------------------------
# Casimir invariants
# ---------------------------------------------------------------------------


def _raising_matrix(gens, chain="low"):
    """Root vectors E_ab for a < b from nested commutators of the e_i.

    E_{a,a+1} = e_a and E_ab = [E_ac, E_cb] with the intermediate index
    c = a+1 ("low") or c = b-1 ("high"); both chains give the same matrix in
    this realization, which verify code asserts.
    """
    n = gens.n
    E = [[None] * n for _ in range(n)]
    for a in range(n - 1):
        E[a][a + 1] = gens.e[a].matrix
    for span in range(2, n):
        for a in range(n - span):
            b = a + span
            c = a + 1 if chain == "low" else b - 1
            E[a][b] = _comm(E[a][c], E[c][b])
    return E


def _cartan_diagonal(gens):
    """Traceless weights eps_a with eps_a - eps_{a+1} = 2 h_a, sum eps_a = 0."""
    n = gens.n
    dim = gens.basis.dim
    g = [2.0 * gens.h[i].matrix for i in range(n - 1)]
    tail = np.zeros((dim, dim))
    eps = [None] * n
    mean = sum((k + 1) * g[k] for k in range(n - 1)) / n
    for a in range(n - 1, -1, -1):
        eps[a] = tail - mean
        if a > 0:
            tail = tail + g[a - 1]
    return eps


def casimir_matrix(gens: ChevalleyGenerators, p: int, chain: str = "low") -> SectorOperator:
    """Even-degree invariant C_2p = sum_a (M^p)_aa with M_ab = sum_c G_ac G_cb.

    G is the full n x n generator matrix: nested-commutator root vectors
    above the diagonal, their adjoints below, and the traceless Cartan
    weights eps_a on the diagonal.  The diagonal entries are required for
    centrality; without them the contraction fails to commute with e_i.
    Supported for the undeformed algebra only (gens.q = 1).
    """
    if p < 1 or int(p) != p:
        raise ValueError(f"p must be a positive integer, got {p}")
    if abs(gens.q - 1.0) >= Q_ONE_THRESHOLD:
        raise ValueError("casimir_matrix supports only the undeformed algebra (q = 1)")
    n = gens.n
    E = _raising_matrix(gens, chain)
    eps = _cartan_diagonal(gens)
    G = [[None] * n for _ in range(n)]
    for a in range(n):
        G[a][a] = eps[a]
        for b in range(a + 1, n):
            G[a][b] = E[a][b]
            G[b][a] = E[a][b].T.copy()
    M = _opmat_square(G)
    P = M
    for _ in range(int(p) - 1):
        P = _opmat_mul(P, M)
    dim = gens.basis.dim
    c = np.zeros((dim, dim))
    for a in range(n):
        c += P[a][a]
    return SectorOperator(gens.basis, c)


def _opmat_mul(A, B):
    n = len(A)
    return [
        [sum(A[a][c] @ B[c][b] for c in range(n)) for b in range(n)] for a in range(n)
    ]


def _opmat_square(G):
    return _opmat_mul(G, G)


def su2_casimir(gens: ChevalleyGenerators) -> SectorOperator:
    """Quadratic su(2) invariant J0 (J0 - 1) + J+ J-, eigenvalue j(j+1)."""
    if gens.rank != 1:
        raise ValueError("su2_casimir needs rank-1 generators (two sites)")
    j0 = gens.h[0].matrix
    c = j0 @ (j0 - np.eye(gens.basis.dim)) + gens.e[0].matrix @ gens.f[0].matrix
    return SectorOperator(gens.basis, c)


def suq2_casimir(gens: ChevalleyGenerators, q: float) -> SectorOperator:
    """Quadratic su_q(2) invariant [J0][J0 - 1] + J+ J-, eigenvalue [j][j+1]."""
    if gens.rank != 1:
        raise ValueError("suq2_casimir needs rank-1 generators (two sites)")
    m = np.diag(gens.h[0].matrix)
    diag = np.array([sym_qnum(x, q) * sym_qnum(x - 1.0, q) for x in m])
    c = np.diag(diag) + gens.e[0].matrix @ gens.f[0].matrix
    return SectorOperator(gens.basis, c)


# ---------------------------------------------------------------------------
# number reconstruction from the Cartan generators
# ---------------------------------------------------------------------------


def omega_matrix(n: int) -> np.ndarray:
    """Difference-plus-total matrix: rows i < n carry (1, -1) at (i, i+1),
    the last row is all ones.  Applied to (N_1..N_n) it yields the n - 1
    differences N_i - N_{i+1} and the total number."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    om = np.zeros((n, n))
    for i in range(n - 1):
        om[i, i] = 1.0
        om[i, i + 1] = -1.0
    om[n - 1, :] = 1.0
    if abs(np.linalg.det(om)) < 0.5:
        raise RuntimeError("omega matrix unexpectedly singular")
    return om


def verify_number_reconstruction(basis: FockSectorBasis) -> ResidualReport:
    """Residual of N_i = sum_j (Omega^-1)_ij (2 h_j) + (Omega^-1)_in h.

    h_j = (N_j - N_{j+1})/2 feeds the difference rows of Omega through the
    factor 2, and h = sum N_i is the sector total.  Exact by linear algebra,
    asserted entrywise on the sector.
    """
    n = basis.n_sites
    gens = su_n_generators(basis)
    om_inv = np.linalg.inv(omega_matrix(n))
    total = float(basis.total_quanta) * np.eye(basis.dim)
    rep = ResidualReport(dim=basis.dim)
    for i in range(n):
        recon = om_inv[i, n - 1] * total
        for jx in range(n - 1):
            recon = recon + om_inv[i, jx] * (2.0 * gens.h[jx].matrix)
        rep.add(f"N{i+1}", _maxabs(number_operator(basis, i + 1).matrix - recon))
    return rep
