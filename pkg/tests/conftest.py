import numpy as np


def prefix_weight_matrix(n, h):
    """Row k holds the composite-rule weights for the integral up to node k.

    Independent restatement of the cumulative rule: plain Simpson pairs for
    even prefixes, a four-node opening rule for k=1, and a trailing
    three-eighths closure for odd k >= 3.
    """
    w = np.zeros((n + 1, n + 1))
    for k in range(2, n + 1, 2):
        w[k, :k + 1][0] += h / 3.0
        w[k, 1:k:2] += 4.0 * h / 3.0
        w[k, 2:k:2] += 2.0 * h / 3.0
        w[k, k] += h / 3.0
    w[1, :4] = np.array([9.0, 19.0, -5.0, 1.0]) * h / 24.0
    for k in range(3, n + 1, 2):
        w[k] = w[k - 3]
        w[k, k - 3:k + 1] += np.array([1.0, 3.0, 3.0, 1.0]) * 3.0 * h / 8.0
    return w
