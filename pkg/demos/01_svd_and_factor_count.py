"""
Standardizing data and counting common factors
==============================================

Screening works on standardized predictors and a centred response.  The thin
SVD of the standardized design is shared by every profiled method, and the
number of common factors is read off its singular values.
"""

import numpy as np

from factorscreen import center_response, eigen_ratio_d, standardize_columns, thin_svd

rng = np.random.default_rng(0)

# three common factors drive 400 predictors, observed on 60 samples
n, p = 60, 400
Z = rng.standard_normal((n, 3))
raw = 3 * Z @ rng.standard_normal((3, p)) + rng.standard_normal((n, p))
raw = raw * rng.uniform(0.1, 50, p) + rng.uniform(-10, 10, p)

X = standardize_columns(raw)
print("column means ~ 0:", np.abs(X.values.mean(axis=0)).max())
print("column sds   ~ 1:", np.abs(X.values.std(axis=0, ddof=1) - 1).max())

###############################################################################
# The SVD comes with a fixed sign convention, so repeated runs agree exactly.

svd = thin_svd(X)
print("leading singular values:", np.round(svd.mu[:6], 2))
print("numerical rank:", svd.numerical_rank, "(centering removes one direction)")

###############################################################################
# The factor count maximises the ratio of consecutive squared singular values.

d = eigen_ratio_d(svd.mu)
print("estimated number of factors:", d)

# it does not care about the overall scale
assert eigen_ratio_d(10 * svd.mu) == d

y = center_response(raw[:, 0] - raw[:, 1] + rng.standard_normal(n))
print("response mean after centering:", y.values.mean())
