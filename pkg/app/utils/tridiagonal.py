from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SymTridiagonal:
    """Matriz simétrica tridiagonal guardada como (diagonal, subdiagonal)."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.off, dtype=float)
        if diag.ndim != 1 or off.ndim != 1 or off.size != max(diag.size - 1, 0):
            raise ValueError("tridiagonal exige diag (n,) e off (n-1,)")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        result = self.diag * z
        result[:-1] += self.off * z[1:]
        result[1:] += self.off * z[:-1]
        return result

    def quadratic_form(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(np.dot(self.diag * z, z) + 2.0 * np.dot(self.off * z[:-1], z[1:]))

    def scaled(self, d: np.ndarray) -> "SymTridiagonal":
        """D H D para D = diag(d)."""
        return SymTridiagonal(self.diag * d * d, self.off * d[:-1] * d[1:])

    def shifted(self, lam: float) -> "SymTridiagonal":
        return SymTridiagonal(self.diag + lam, self.off)

    def __add__(self, other: "SymTridiagonal") -> "SymTridiagonal":
        return SymTridiagonal(self.diag + other.diag, self.off + other.off)

    def __mul__(self, factor: float) -> "SymTridiagonal":
        return SymTridiagonal(factor * self.diag, factor * self.off)

    __rmul__ = __mul__

    def upper_banded(self) -> np.ndarray:
        """Formato (2, n) de `scipy.linalg.solveh_banded` / `cholesky_banded`."""
        banded = np.zeros((2, self.size))
        banded[0, 1:] = self.off
        banded[1, :] = self.diag
        return banded

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)
