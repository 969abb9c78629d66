"""Parameter triple (alpha, beta, rho) for the Jacobi-Cherednik family."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class JacobiParams:
    """Admissible parameter pair with the derived spectral shift rho.

    The family requires alpha >= beta >= -1/2 with alpha > -1/2; rho is
    always alpha + beta + 1 and is strictly positive on the admissible set.
    """

    alpha: float
    beta: float
    rho: float = field(init=False)

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not (alpha >= beta >= -0.5):
            raise ValueError(
                f"require alpha >= beta >= -1/2, got alpha={alpha}, beta={beta}"
            )
        if not alpha > -0.5:
            raise ValueError(f"require alpha > -1/2, got alpha={alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "rho", alpha + beta + 1.0)

    def shifted(self, k: int = 1) -> "JacobiParams":
        """Parameters raised by k in both slots, as used by derivative ladders."""
        return JacobiParams(self.alpha + k, self.beta + k)
