"""
Domain types for ARMA(p,q)-GARCH(k,l) models with optional fractional d.

Conventions:
    r_t - mu              return deviation
    x_t = (1-B)^d (r_t - mu)
    x_t = Σ phi_i x_{t-i} + Σ theta_j a_{t-j} + a_t
    sigma_t^2 = gamma + Σ_{m<=k} beta_m sigma_{t-m}^2 + Σ_{n<=l} alpha_n a_{t-n}^2
    a_t = eps_t * sigma_t,  eps_t iid with the innovation law
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from common.exceptions import ParameterError
from common.utils import taildep_setting
from dists.constants import DistributionFamily
from dists.distributions import InnovationDist, Normal, distribution_class

from .constants import ParameterBounds, SignificanceLevels


@dataclass(frozen=True)
class ModelSpec:
    """Lag orders, fractional flag and innovation family."""

    p: int = 0
    q: int = 0
    k: int = 1
    l: int = 1
    fractional: bool = False
    dist: str = DistributionFamily.NORMAL

    def __post_init__(self):
        max_order = int(taildep_setting("MAX_LAG_ORDER"))
        for name in ("p", "q", "k", "l"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0 or value > max_order:
                raise ParameterError(
                    f"lag order {name}={value!r} outside 0..{max_order}",
                    errors={name: f"must be an integer in 0..{max_order}"},
                )
        distribution_class(self.dist)

    @property
    def max_order(self) -> int:
        return max(self.p, self.q, self.k, self.l)

    @property
    def dist_class(self):
        return distribution_class(self.dist)

    @property
    def label(self) -> str:
        mean = f"FARIMA({self.p},d,{self.q})" if self.fractional else f"ARMA({self.p},{self.q})"
        return f"{mean}-GARCH({self.k},{self.l}) {self.dist}"

    @property
    def param_names(self) -> List[str]:
        names = ["mu"]
        names += [f"ar{i + 1}" for i in range(self.p)]
        names += [f"ma{j + 1}" for j in range(self.q)]
        if self.fractional:
            names.append("d")
        names.append("gamma")
        names += [f"alpha{n + 1}" for n in range(self.l)]
        names += [f"beta{m + 1}" for m in range(self.k)]
        names += list(self.dist_class.param_names)
        return names

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def bounds(self) -> List[Tuple[float, float]]:
        """Optimizer bounds, aligned with param_names."""
        out = [ParameterBounds.MU]
        out += [ParameterBounds.ARMA] * (self.p + self.q)
        if self.fractional:
            out.append(ParameterBounds.D)
        out.append(ParameterBounds.GAMMA)
        out += [ParameterBounds.ARCH] * self.l
        out += [ParameterBounds.GARCH] * self.k
        out += self.dist_class.bounds()
        return out

    def as_dict(self) -> Dict[str, object]:
        return {"p": self.p, "q": self.q, "k": self.k, "l": self.l, "fractional": self.fractional, "dist": self.dist}


@dataclass(frozen=True)
class ArmaGarchParams:
    """Full parameter set of one marginal model."""

    mu: float = 0.0
    phi: Tuple[float, ...] = ()
    theta: Tuple[float, ...] = ()
    gamma: float = 1.0
    alpha: Tuple[float, ...] = ()
    beta: Tuple[float, ...] = ()
    d: float = 0.0
    dist: InnovationDist = field(default_factory=Normal)

    def __post_init__(self):
        for name in ("phi", "theta", "alpha", "beta"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    @property
    def persistence(self) -> float:
        return float(sum(self.alpha) + sum(self.beta))

    def unconditional_variance(self) -> float:
        if not (self.alpha or self.beta):
            return self.gamma
        return self.gamma / (1.0 - self.persistence)

    def check_spec(self, spec: ModelSpec) -> None:
        """Raise ParameterError when lag counts disagree with the spec."""
        shapes = {"phi": spec.p, "theta": spec.q, "alpha": spec.l, "beta": spec.k}
        for name, expected in shapes.items():
            if len(getattr(self, name)) != expected:
                raise ParameterError(f"{name} has {len(getattr(self, name))} lags, spec {spec.label} needs {expected}")
        if self.dist.family != spec.dist:
            raise ParameterError(f"innovation family {self.dist.family} does not match spec {spec.dist}")
        if not spec.fractional and self.d != 0.0:
            raise ParameterError("d must be 0 for a non-fractional spec")

    def validate(self) -> None:
        """
        Check the stationarity and positivity invariants.

        Raises:
            ParameterError: If any invariant fails
        """
        errors = {}
        if not (self.gamma >= 0.0):
            errors["gamma"] = "must be >= 0"
        if any(a < 0.0 for a in self.alpha):
            errors["alpha"] = "must be >= 0"
        if any(b < 0.0 for b in self.beta):
            errors["beta"] = "must be >= 0"
        if (self.alpha or self.beta) and not self.persistence < 1.0:
            errors["persistence"] = f"Σα + Σβ = {self.persistence:.6f} must be < 1"
        if not (0.0 <= self.d < 0.5):
            errors["d"] = "must be in [0, 0.5)"
        if errors:
            raise ParameterError("ARMA-GARCH parameters violate model constraints", errors=errors)

    def to_vector(self, spec: ModelSpec) -> np.ndarray:
        values = [self.mu, *self.phi, *self.theta]
        if spec.fractional:
            values.append(self.d)
        values += [self.gamma, *self.alpha, *self.beta]
        values += list(self.dist.param_vector())
        return np.array(values, dtype=float)

    @classmethod
    def from_vector(cls, spec: ModelSpec, vector, **dist_fixed) -> "ArmaGarchParams":
        v = [float(x) for x in vector]
        if len(v) != spec.n_params:
            raise ParameterError(f"expected {spec.n_params} values for {spec.label}, got {len(v)}")
        i = 0
        mu = v[i]; i += 1
        phi = tuple(v[i:i + spec.p]); i += spec.p
        theta = tuple(v[i:i + spec.q]); i += spec.q
        d = 0.0
        if spec.fractional:
            d = v[i]; i += 1
        gamma = v[i]; i += 1
        alpha = tuple(v[i:i + spec.l]); i += spec.l
        beta = tuple(v[i:i + spec.k]); i += spec.k
        dist = spec.dist_class.from_vector(v[i:], **dist_fixed)
        return cls(mu=mu, phi=phi, theta=theta, gamma=gamma, alpha=alpha, beta=beta, d=d, dist=dist)

    def as_dict(self, spec: Optional[ModelSpec] = None) -> Dict[str, float]:
        """Named values, in spec order when a spec is given."""
        if spec is None:
            spec = ModelSpec(
                p=len(self.phi), q=len(self.theta), k=len(self.beta), l=len(self.alpha),
                fractional=self.d != 0.0, dist=self.dist.family,
            )
        return dict(zip(spec.param_names, self.to_vector(spec).tolist()))


@dataclass(frozen=True)
class FilterOutput:
    """Shocks, conditional volatilities and standardized residuals."""

    a: np.ndarray
    sigma: np.ndarray
    eps: np.ndarray
    loglik: float

    def __post_init__(self):
        for name in ("a", "sigma", "eps"):
            getattr(self, name).setflags(write=False)

    @property
    def n_obs(self) -> int:
        return len(self.eps)

    def to_frame(self, index=None) -> pd.DataFrame:
        return pd.DataFrame({"a": self.a, "sigma": self.sigma, "eps": self.eps}, index=index)


@dataclass(frozen=True)
class FittedModel:
    """Maximum likelihood fit of one marginal model."""

    spec: ModelSpec
    params: ArmaGarchParams
    loglik: float
    stderr: Dict[str, float]
    filtered: FilterOutput
    converged: bool = True
    message: str = ""
    n_starts: int = 0

    @property
    def n_obs(self) -> int:
        return self.filtered.n_obs

    @property
    def n_params(self) -> int:
        return self.spec.n_params

    @property
    def aic(self) -> float:
        return 2.0 * self.n_params - 2.0 * self.loglik

    @property
    def bic(self) -> float:
        return self.n_params * math.log(self.n_obs) - 2.0 * self.loglik

    @property
    def dist(self) -> InnovationDist:
        return self.params.dist

    def estimates(self) -> Dict[str, float]:
        return self.params.as_dict(self.spec)

    def param_table(self) -> pd.DataFrame:
        """Estimate, stderr, Wald t value and two-sided p value per parameter."""
        rows = []
        for name, value in self.estimates().items():
            se = self.stderr.get(name, float("nan"))
            t_value = value / se if se and math.isfinite(se) and se > 0 else float("nan")
            p_value = 2.0 * stats.norm.sf(abs(t_value)) if math.isfinite(t_value) else float("nan")
            rows.append({"parameter": name, "estimate": value, "stderr": se, "t_value": t_value, "p_value": p_value})
        return pd.DataFrame(rows, columns=["parameter", "estimate", "stderr", "t_value", "p_value"])

    def all_significant(self, alpha: float = SignificanceLevels.DEFAULT) -> bool:
        """True when every non-mean parameter has a Wald p value below alpha."""
        table = self.param_table()
        tested = table[table["parameter"] != "mu"]
        if tested.empty:
            return True
        return bool((tested["p_value"] < alpha).all())

    def summary(self) -> Dict[str, object]:
        return {
            "spec": self.spec.label,
            "n_obs": self.n_obs,
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "converged": self.converged,
            "estimates": self.estimates(),
            "stderr": dict(self.stderr),
            "dist_fixed": self.params.dist.fixed_params(),
        }
