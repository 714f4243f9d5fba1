from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Config:
    """Numerical tolerances shared by every operation.

    Relative tolerances are scaled by the norm named next to them; absolute
    ones are used as is.

    Attributes
    ----------
    tau_unit : float
        allowed deviation ``| ||f|| - 1 |`` for unit-norm frames.
    tau_sym : float
        allowed asymmetry ``||M - M*||`` relative to ``max(1, ||M||)``.
    tau_tight : float
        tightness residual bound, relative to ``max(1, lambda)``.
    tau_psd : float
        most negative eigenvalue tolerated, relative to ``||M||``.
    tau_rank : float
        rank cut-off for the frame operator, relative to its top eigenvalue.
    tau_null : float
        null-space cut-off, relative to ``max(1, lambda_max)``.
    tau_hull : float
        distance below which the origin counts as inside a convex hull.
    tau_orth : float
        ``|<f_a, f_b>|`` below which two planar vectors count as orthogonal.
    borderline_factor : float
        decisions within this factor of their tolerance are flagged.
    hull_max_iter, perceptron_cap, jacobi_max_sweeps : int
        iteration budgets.
    """

    tau_unit: float = 1e-8
    tau_sym: float = 1e-12
    tau_tight: float = 1e-9
    tau_psd: float = 1e-10
    tau_rank: float = 1e-10
    tau_null: float = 1e-8
    tau_hull: float = 1e-9
    tau_orth: float = 1e-10
    borderline_factor: float = 10.0
    hull_max_iter: int = 1_000_000
    perceptron_cap: int = 1_000_000
    jacobi_max_sweeps: int = 100

    def replace(self, **changes) -> "Config":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise KeyError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT = Config()
