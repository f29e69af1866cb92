"""q-number arithmetic for the nonlinearity-deformed oscillator algebras.

The deformation strength gamma >= 0 maps to the deformation base
q = 1 / sqrt(1 + gamma/2), so 0 < q <= 1 and s = ln q <= 0.  Two kinds of
q-integers appear: the symmetric ones [x] = (q^x - q^-x) / (q - q^-1) used
by the su_q(n) generators, and the basic ones {n} = ((1 + gamma/2)^n - 1) /
(gamma/2) that are the eigenvalues of b'b for the deformed lattice
oscillator.  They are related by {n} = q^(1-n) [n].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Below this distance from q = 1 the defining ratios are evaluated by their
# analytic limits ([x] -> x, {n} -> n) to avoid 0/0 loss of significance.
Q_ONE_THRESHOLD = 1e-8


@dataclass(frozen=True)
class DeformationParameter:
    """Deformation strength with its derived base q and exponent s = ln q."""

    gamma: float
    q: float
    s: float


def q_from_gamma(gamma: float) -> DeformationParameter:
    """Map the nonlinearity strength gamma >= 0 to q = 1/sqrt(1 + gamma/2)."""
    if not gamma >= 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    q = 1.0 / math.sqrt(1.0 + 0.5 * gamma)
    return DeformationParameter(gamma=float(gamma), q=q, s=math.log(q))


def sym_qnum(x: float, q: float) -> float:
    """Symmetric q-number [x] = (q^x - q^-x) / (q - q^-1); [x] -> x as q -> 1."""
    if not q > 0.0:
        raise ValueError(f"q must be > 0, got {q}")
    if abs(q - 1.0) < Q_ONE_THRESHOLD:
        return float(x)
    return (q**x - q**-x) / (q - 1.0 / q)


def basic_qnum(n: int, gamma: float) -> float:
    """Basic q-number {n} = ((1 + gamma/2)^n - 1) / (gamma/2); {n} -> n as gamma -> 0.

    These are the b'b eigenvalues of the deformed lattice oscillator, with
    base 1 + gamma/2 = q^-2 so that {n+1} - {n} = (1 + gamma/2)^n, which is
    exactly the commutation rule [b, b'] = 1 + (gamma/2) b'b.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    if not gamma >= 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    half = 0.5 * gamma
    if half < Q_ONE_THRESHOLD:
        return float(n)
    return ((1.0 + half) ** n - 1.0) / half


def q_factorial(m: int, q: float) -> float:
    """q-factorial [m]! = [1][2]...[m] of symmetric q-numbers, [0]! = 1."""
    if m < 0 or int(m) != m:
        raise ValueError(f"m must be a nonnegative integer, got {m}")
    out = 1.0
    for i in range(1, int(m) + 1):
        out *= sym_qnum(i, q)
    return out


def q_binomial(m: int, n: int, q: float) -> float:
    """q-binomial [m]! / ([n]! [m-n]!), evaluated as a product of ratios."""
    if m < 0 or n < 0 or n > m or int(m) != m or int(n) != n:
        raise ValueError(f"need 0 <= n <= m, got m={m}, n={n}")
    n = min(int(n), int(m) - int(n))
    out = 1.0
    for i in range(1, n + 1):
        out *= sym_qnum(m - n + i, q) / sym_qnum(i, q)
    return out
