"""Shared fixtures: the curve corpus covering every (genus, window) shape."""

import pytest

from hassewitt.curve import validate_curve

# Ascending coefficient lists f_0..f_d.  Together these cover all nine
# (g, r) shapes: r = 2g (f_0 = 0, odd degree), 2g+1, and 2g+2.
CORPUS_COEFFS = [
    [0, 1, 0, 1],                    # g=1 r=2  y^2 = x^3 + x
    [1, 1, 0, 1],                    # g=1 r=3  y^2 = x^3 + x + 1
    [0, 2, 3, 1],                    # g=1 r=2
    [5, 0, 1, 3],                    # g=1 r=3
    [1, 1, 1, 1, 1],                 # g=1 r=4
    [0, 1, 0, 0, 0, 1],              # g=2 r=4
    [1, 1, 0, 3, 0, 1],              # g=2 r=5
    [3, 1, 4, 1, 5, 9],              # g=2 r=5
    [1, 1, 0, 0, 0, 0, 1],           # g=2 r=6
    [0, 1, 0, 0, 0, 0, 0, 1],        # g=3 r=6
    [1, 1, 0, 0, 0, 0, 0, 1],        # g=3 r=7
    [19, 17, 13, 11, 7, 5, 3, 2],    # g=3 r=7
    [1, 2, 3, 4, 5, 6, 7, 8, 9],     # g=3 r=8
    [2, 7, 1, 8, 2, 8, 1, 8, 3],     # g=3 r=8
]


@pytest.fixture(scope="session")
def corpus():
    return [validate_curve(c) for c in CORPUS_COEFFS]
