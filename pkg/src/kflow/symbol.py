"""Flat-background principal symbol of the linearized fourth-order operator.

Replacing covariant derivatives of the linearization by a covector zeta
turns the operator into a degree-4 matrix polynomial acting on symmetric
perturbations h.  Two variants are exposed:

* ungauged: the raw linearization.  It annihilates the pure gauge mode
  h = zeta(x)zeta (so the operator is not elliptic as it stands), and both
  the identity perturbation and any transverse-traceless h map to |zeta|^4 h.
* gauged: the symbol after the gauge-breaking term is added.  On the gauge
  mode its quadratic form is (3/4)|zeta|^8, which is the ellipticity witness.

Both printed forms are manifestly symmetric in (i, j); no extra
symmetrization is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymbolProbe",
    "ungauged_symbol",
    "gauged_symbol",
    "quadratic_form",
    "symbol_spectrum",
    "tt_projection",
]

_VARIANTS = ("ungauged", "gauged")


@dataclass(frozen=True)
class SymbolProbe:
    """A covector and a symmetric perturbation; h is symmetrized on input."""

    zeta: np.ndarray
    h: np.ndarray

    def __init__(self, zeta, h):
        zeta = np.asarray(zeta, dtype=float)
        h = np.asarray(h, dtype=float)
        if zeta.shape != (3,) or h.shape != (3, 3):
            raise ValueError("expected a 3-vector and a 3x3 matrix")
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "h", 0.5 * (h + h.T))


def ungauged_symbol(p: SymbolProbe) -> np.ndarray:
    """Symbol of the raw linearization at the flat metric."""
    z, h = p.zeta, p.h
    n2 = float(z @ z)
    hz = h @ z
    zhz = float(z @ hz)
    trh = float(np.trace(h))
    zz = np.outer(z, z)
    eye = np.eye(3)
    return (0.5 * zhz * zz
            + n2 * n2 * h
            - n2 * (np.outer(z, hz) + np.outer(hz, z))
            + 0.5 * n2 * trh * zz
            + 0.5 * eye * (n2 * zhz - n2 * n2 * trh))


def gauged_symbol(p: SymbolProbe) -> np.ndarray:
    """Symbol after the gauge-breaking correction (bi-laplacian leading term)."""
    z, h = p.zeta, p.h
    n2 = float(z @ z)
    hz = h @ z
    zhz = float(z @ hz)
    trh = float(np.trace(h))
    zz = np.outer(z, z)
    eye = np.eye(3)
    return (n2 * n2 * h
            + 0.5 * n2 * eye * (zhz - n2 * trh)
            - 0.25 * n2 * (np.outer(z, hz) + np.outer(hz, z))
            + 0.25 * zz * (2.0 * zhz - n2 * trh))


def _apply(variant: str, p: SymbolProbe) -> np.ndarray:
    if variant not in _VARIANTS:
        raise ValueError(f"unknown symbol variant {variant!r}; expected one of {_VARIANTS}")
    return ungauged_symbol(p) if variant == "ungauged" else gauged_symbol(p)


def quadratic_form(variant: str, p: SymbolProbe) -> float:
    """<sigma(zeta) h, h> with the Frobenius pairing."""
    return float(np.sum(_apply(variant, p) * p.h))


# Orthonormal basis of symmetric 3x3 matrices (off-diagonals sqrt(2)-weighted).
def _sym_basis():
    basis = []
    for i in range(3):
        e = np.zeros((3, 3))
        e[i, i] = 1.0
        basis.append(e)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        e = np.zeros((3, 3))
        e[i, j] = e[j, i] = inv_sqrt2
        basis.append(e)
    return basis


_BASIS = _sym_basis()


def symbol_spectrum(variant: str, zeta) -> np.ndarray:
    """Singular values of the symbol as a map on symmetric matrices.

    Returned sorted descending and normalized by |zeta|^4, so the spectrum
    depends only on the direction of zeta.
    """
    zeta = np.asarray(zeta, dtype=float)
    n2 = float(zeta @ zeta)
    if n2 == 0.0:
        raise ValueError("zero covector has no normalized spectrum")
    mat = np.empty((6, 6))
    for j, e in enumerate(_BASIS):
        out = _apply(variant, SymbolProbe(zeta, e))
        for i, f in enumerate(_BASIS):
            mat[i, j] = float(np.sum(out * f))
    svals = np.linalg.svd(mat, compute_uv=False)
    return np.sort(svals)[::-1] / (n2 * n2)


def tt_projection(zeta, h) -> np.ndarray:
    """Transverse-traceless part of h with respect to zeta."""
    zeta = np.asarray(zeta, dtype=float)
    h = np.asarray(h, dtype=float)
    h = 0.5 * (h + h.T)
    n2 = float(zeta @ zeta)
    if n2 == 0.0:
        raise ValueError("zero covector")
    proj = np.eye(3) - np.outer(zeta, zeta) / n2
    ph_p = proj @ h @ proj
    return ph_p - 0.5 * proj * float(np.sum(proj * h))
