"""Two-domain Bayesian spatial voting model with bridge detection.

The compiled core exposes the sampler and its building blocks; this package
adds small NumPy conveniences for inspecting a fit.
"""

import numpy as np

from ._core import (
    DataError,
    NumericError,
    draw_pg,
    fit,
    gelman_rubin,
    log_bayes_factor,
    simulate,
)

__all__ = [
    "DataError",
    "NumericError",
    "bridge_probability",
    "draw_pg",
    "fit",
    "gelman_rubin",
    "log_bayes_factor",
    "max_rhat",
    "pip",
    "simulate",
]

__version__ = "1.0.0"

_MONITORED = (
    "log_joint",
    "zeta_total",
    "model_size",
    "eta0",
    "rho_mu",
    "kappa2_mu",
    "omega_alpha",
    "kappa2_alpha",
    "rho_beta",
    "sigma2_beta",
)


def max_rhat(result):
    """Worst potential scale reduction factor over the monitored series.

    Monitors the stored scalar series plus every legislator's
    bridge-regression linear predictor. Returns (worst, name).
    """
    chains = result["chains"]
    if len(chains) < 2:
        raise ValueError("need >= 2 chains to compute R-hat")
    worst, worst_name = 0.0, ""
    for name in _MONITORED:
        r = gelman_rubin([np.asarray(c[name], dtype=float) for c in chains])
        if r > worst:
            worst, worst_name = r, name
    linpred = [np.asarray(c["linpred"], dtype=float) for c in chains]
    for i in range(linpred[0].shape[1]):
        r = gelman_rubin([lp[:, i] for lp in linpred])
        if r > worst:
            worst, worst_name = r, f"linpred[{i}]"
    return worst, worst_name


def pip(result):
    """Posterior inclusion probability of each bridge-membership covariate."""
    xi = np.concatenate([np.asarray(c["xi"], dtype=float) for c in result["chains"]])
    return xi.mean(axis=0)


def bridge_probability(result):
    """Posterior probability that each legislator is a bridge."""
    zeta = np.concatenate([np.asarray(c["zeta"], dtype=float) for c in result["chains"]])
    return zeta.mean(axis=0)
