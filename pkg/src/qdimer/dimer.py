"""Two-mode Hamiltonians reduced to spin tridiagonal form on a fixed sector.

A two-site sector with total quanta M carries spin j = M/2 through the
Schwinger map, with magnetic label m = (n_1 - n_2)/2 running from -j to j.
Both models become real symmetric tridiagonal matrices in the |j m> basis:

  discrete nonlinear Schrodinger dimer:  H = eps (J+ + J-) + (gamma/2) J0^2
  deformed (integrable) lattice dimer:   H = Jq+ + Jq-   at q(gamma)

The physical two-site chain Hamiltonians differ from these by an overall
scale and a shift that are constant on the sector; both constants are kept
on the returned object so absolute energies can be reconstructed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .qnumbers import q_from_gamma, sym_qnum

MODELS = ("dnls", "al")


@dataclass(frozen=True)
class SpinSector:
    """Spin sector carrying 2j = total quanta of the two-site problem."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0 or int(self.two_j) != self.two_j:
            raise ValueError(f"two_j must be a nonnegative integer, got {self.two_j}")

    @property
    def j(self) -> float:
        return 0.5 * self.two_j

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        return -self.j + np.arange(self.dim)


@dataclass
class TridiagonalHamiltonian:
    """Symmetric tridiagonal sector Hamiltonian with chain-energy metadata.

    diag[k] and off[k] couple the m = -j + k ladder; eigenvalues of the
    physical two-site chain are energy_scale * lambda + energy_shift.
    """

    sector: SpinSector
    model: str
    diag: np.ndarray
    off: np.ndarray
    params: dict = field(default_factory=dict)
    energy_scale: float = 1.0
    energy_shift: float = 0.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        self.diag = np.asarray(self.diag, dtype=float)
        self.off = np.asarray(self.off, dtype=float)
        if self.diag.shape != (self.sector.dim,):
            raise ValueError("diagonal length must equal the sector dimension")
        if self.off.shape != (max(self.sector.dim - 1, 0),):
            raise ValueError("off-diagonal length must be dim - 1")

    @property
    def dim(self) -> int:
        return self.sector.dim

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.off.size:
            m += np.diag(self.off, 1) + np.diag(self.off, -1)
        return m

    def to_physical(self, eigenvalues: np.ndarray) -> np.ndarray:
        """Map sector eigenvalues to absolute two-site chain energies."""
        return self.energy_scale * np.asarray(eigenvalues, dtype=float) + self.energy_shift


def build_qdnls_dimer(two_j: int, gamma: float, epsilon: float = 1.0) -> TridiagonalHamiltonian:
    """Nonlinear dimer H = eps (J+ + J-) + (gamma/2) J0^2 on the spin-j ladder.

    diag_m = (gamma/2) m^2 and off(m, m+1) = eps sqrt((j - m)(j + m + 1)).
    The physical chain with hopping eps and per-site nonlinearity gamma/2
    has spectrum -lambda - (gamma/2) j^2, recorded in the energy metadata.
    """
    sector = SpinSector(two_j)
    if two_j == 0:
        warnings.warn("two_j = 0 gives a degenerate 1x1 sector", stacklevel=2)
    if gamma < 0:
        warnings.warn("negative gamma: attractive convention", stacklevel=2)
    m = sector.m_values
    diag = 0.5 * gamma * m**2
    off = np.array(
        [epsilon * math.sqrt((two_j - k) * (k + 1)) for k in range(sector.dim - 1)]
    )
    j = sector.j
    return TridiagonalHamiltonian(
        sector=sector,
        model="dnls",
        diag=diag,
        off=off,
        params={"gamma": float(gamma), "epsilon": float(epsilon), "chain_gamma": 0.5 * gamma},
        energy_scale=-1.0,
        energy_shift=-0.5 * gamma * j * j,
    )


def build_qal_dimer(two_j: int, gamma: float) -> TridiagonalHamiltonian:
    """Integrable deformed dimer H = Jq+ + Jq- at q = 1/sqrt(1 + gamma/2).

    Zero diagonal and off(m, m+1) = sqrt([j - m][j + m + 1]) in symmetric
    q-numbers, so the spectrum is symmetric around zero.  The physical
    two-site chain (hops of the deformed lattice oscillators plus the 2 sum N
    term) has spectrum -q^(1/2 - j) lambda + 2 M; the sector constants come
    from C_1^-1 = q^-j and from {n} = q^(1-n) [n] relating the two kinds of
    hops, and are recorded in the energy metadata.
    """
    sector = SpinSector(two_j)
    if two_j == 0:
        warnings.warn("two_j = 0 gives a degenerate 1x1 sector", stacklevel=2)
    dp = q_from_gamma(gamma)
    diag = np.zeros(sector.dim)
    off = np.array(
        [
            math.sqrt(sym_qnum(two_j - k, dp.q) * sym_qnum(k + 1, dp.q))
            for k in range(sector.dim - 1)
        ]
    )
    j = sector.j
    return TridiagonalHamiltonian(
        sector=sector,
        model="al",
        diag=diag,
        off=off,
        params={"gamma": float(gamma), "q": dp.q},
        energy_scale=-(dp.q ** (0.5 - j)),
        energy_shift=2.0 * two_j,
    )


def build_dimer(model: str, two_j: int, gamma: float, epsilon: float = 1.0) -> TridiagonalHamiltonian:
    """Dispatch on the model name ("dnls" or "al")."""
    if model == "dnls":
        return build_qdnls_dimer(two_j, gamma, epsilon)
    if model == "al":
        if epsilon != 1.0:
            raise ValueError("epsilon applies to the dnls model only")
        return build_qal_dimer(two_j, gamma)
    raise ValueError(f"model must be one of {MODELS}, got {model!r}")
