"""Jones-calculus primitives: linear polarization states, rotations, retarders.

Conventions: 2-vectors are (horizontal, vertical) complex amplitudes;
angles are degrees counter-clockwise from horizontal.  Retarders are
unitary with symmetric +-retardance/2 phases on the fast/slow axes.
"""

from __future__ import annotations

import numpy as np


def linear_jones(angle_deg: float) -> np.ndarray:
    """Unit Jones vector for linear polarization at the given angle."""
    a = np.deg2rad(angle_deg)
    return np.array([np.cos(a), np.sin(a)], dtype=complex)


def rotation(angle_deg: float) -> np.ndarray:
    """Rotation matrix taking lab-frame components to a frame rotated by angle."""
    a = np.deg2rad(angle_deg)
    return np.array([[np.cos(a), np.sin(a)], [-np.sin(a), np.cos(a)]])


def retarder(retardance_rad: float, fast_axis_deg: float = 0.0) -> np.ndarray:
    """Jones matrix of a linear retarder with the given retardance and fast axis."""
    half = retardance_rad / 2.0
    j0 = np.array([[np.exp(-1j * half), 0.0], [0.0, np.exp(1j * half)]])
    r = rotation(fast_axis_deg)
    return r.T @ j0 @ r


def is_normalized(state: np.ndarray, tol: float = 1e-12) -> bool:
    """Whether |h|^2 + |v|^2 = 1 within tol."""
    return abs(float(np.vdot(state, state).real) - 1.0) <= tol


def projection_probability(analyzer: np.ndarray, state: np.ndarray) -> float:
    """|<analyzer|state>|^2 for unit analyzer and state vectors."""
    return float(abs(np.vdot(analyzer, state)) ** 2)
