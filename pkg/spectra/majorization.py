import numpy as np

from core.errors import DomainError
from .types import as_values


def majorizes(mu, lam, tol: float = 1e-10):
    """True iff lam is majorized by mu.

    Descending partial sums of lam never exceed those of mu and the totals agree;
    the tolerance is scaled by the size of the totals.
    """
    mu = as_values(mu).astype(np.float64)
    lam = as_values(lam).astype(np.float64)
    if mu.shape != lam.shape:
        raise DomainError(f"length mismatch: {mu.shape} vs {lam.shape}")
    mu_sums = np.cumsum(-np.sort(-mu, axis=-1), axis=-1)
    lam_sums = np.cumsum(-np.sort(-lam, axis=-1), axis=-1)
    slack = tol * np.maximum(1.0, np.max(np.abs(np.concatenate([mu_sums, lam_sums], axis=-1)), axis=-1))
    dominated = np.all(lam_sums <= mu_sums + slack[..., None], axis=-1)
    balanced = np.abs(lam_sums[..., -1] - mu_sums[..., -1]) <= slack
    return (dominated & balanced)[()]
