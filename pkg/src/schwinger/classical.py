"""Classical phase-space counterpart of the coupled-boson construction.

Here the two ladder operators are replaced by plain commuting complex
amplitudes (alpha1, alpha2).  The angular-momentum components become
real-valued functions and satisfy jx^2 + jy^2 + jz^2 = jtot^2 exactly:
the square of a classical angular momentum is j^2, with no j(j+1)
correction, and j ranges over a continuum instead of half integers.
No matrices appear anywhere in this module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class ClassicalState:
    """A pair of complex mode amplitudes with an action scale hbar."""

    alpha1: complex
    alpha2: complex
    hbar: float = 1.0


@dataclass(frozen=True)
class ClassicalJ:
    """Real angular-momentum components of one classical state."""

    jx: float
    jy: float
    jz: float
    jtot: float


def classical_components(state: ClassicalState) -> ClassicalJ:
    """Evaluate (jx, jy, jz, jtot) from the amplitudes.

    jx = hbar Re(conj(a1) a2), jy = hbar Im(conj(a1) a2),
    jz = (hbar/2)(|a1|^2 - |a2|^2), jtot = (hbar/2)(|a1|^2 + |a2|^2).
    """
    a1, a2 = complex(state.alpha1), complex(state.alpha2)
    if not all(
        math.isfinite(x) for x in (a1.real, a1.imag, a2.real, a2.imag)
    ):
        raise ValueError(f"non-finite amplitude in ({a1}, {a2})")
    cross = a1.conjugate() * a2
    m1 = a1.real * a1.real + a1.imag * a1.imag
    m2 = a2.real * a2.real + a2.imag * a2.imag
    h = state.hbar
    return ClassicalJ(
        jx=h * cross.real,
        jy=h * cross.imag,
        jz=0.5 * h * (m1 - m2),
        jtot=0.5 * h * (m1 + m2),
    )


def state_with_j(
    j: float, theta: float, phi: float, hbar: float = 1.0
) -> ClassicalState:
    """State whose components have magnitude hbar*j along (theta, phi).

    alpha1 = sqrt(2j) cos(theta/2), alpha2 = sqrt(2j) sin(theta/2) e^{i phi}.
    Any real j >= 0 is allowed; classically nothing restricts j to half
    integers.
    """
    if j < 0:
        raise ValueError(f"j must be non-negative, got {j}")
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    r = math.sqrt(2.0 * j)
    return ClassicalState(
        alpha1=complex(r * math.cos(0.5 * theta)),
        alpha2=r * math.sin(0.5 * theta) * cmath.exp(1j * phi),
        hbar=hbar,
    )


# 64-bit linear congruential generator (Knuth's MMIX constants).  Fixed
# explicitly so the sampled sequences are reproducible bit for bit on any
# platform: x_{k+1} = (A x_k + C) mod 2^64, u_k = (x_{k+1} >> 11) / 2^53.
_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1
_TWO53 = float(1 << 53)


def _uniforms(seed: int) -> Iterator[float]:
    state = seed & _LCG_MASK
    while True:
        state = (state * _LCG_A + _LCG_C) & _LCG_MASK
        yield (state >> 11) / _TWO53


def sample_states(
    count: int, amplitude_bound: float, seed: int, hbar: float = 1.0
) -> list[ClassicalState]:
    """Deterministic pseudo-random states, |alpha_k| <= amplitude_bound.

    Each amplitude is drawn uniformly from the complex disc of the given
    radius (radius = bound * sqrt(u), uniform phase).  The same seed
    always reproduces the same sequence.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if amplitude_bound <= 0:
        raise ValueError(f"amplitude_bound must be positive, got {amplitude_bound}")
    u = _uniforms(seed)
    states = []
    for _ in range(count):
        r1 = amplitude_bound * math.sqrt(next(u))
        t1 = 2.0 * math.pi * next(u)
        r2 = amplitude_bound * math.sqrt(next(u))
        t2 = 2.0 * math.pi * next(u)
        states.append(
            ClassicalState(cmath.rect(r1, t1), cmath.rect(r2, t2), hbar)
        )
    return states
