import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from floerbar import AnnulusScenario, FilteredComplex, Harmonic
from floerbar.poly2 import T


@pytest.fixture
def slide_pair():
    """The five-generator worked example used throughout the slide tests.

    d0 couples only the newborn pair; d1 is the post-birth differential.
    """
    gens = [("b1", 2.0), ("d", 1.1), ("c", 1.0), ("a1", 0.5), ("a2", 0.0)]
    D0 = FilteredComplex.build("F2T", gens, {"c": {"d": 1}, "a2": {"a1": 1}})
    D1 = FilteredComplex.build("F2T", gens, {
        "c": {"d": 1, "b1": 1},
        "a1": {"d": T, "b1": T},
        "a2": {"a1": 1, "c": T},
    })
    return D0, D1


@pytest.fixture
def fam():
    """g_t(theta) = cos(theta) + t cos(2 theta), hole at (pi/2, -0.5)."""
    return AnnulusScenario((Harmonic(1, (1.0,)), Harmonic(2, (0.0, 1.0))),
                           (0.0, 0.3), (math.pi / 2, -0.5))


@pytest.fixture
def fam_avoided():
    """Same family with the hole moved outside every bigon."""
    return AnnulusScenario((Harmonic(1, (1.0,)), Harmonic(2, (0.0, 1.0))),
                           (0.0, 0.3), (math.pi / 2, 0.9))


FAM_PRIME_BIRTH_TIME = 0.43608550938692964  # frozen by scripts/fam_prime_survey.py


@pytest.fixture
def fam_prime():
    """Phase-shifted family g_t = cos(theta) + t cos(2 theta + 0.7).

    The phase breaks the pitchfork symmetry; the single generic birth
    happens at the frozen time above, so the range runs to 0.48.
    """
    c07, s07 = math.cos(0.7), math.sin(0.7)
    return AnnulusScenario((Harmonic(1, (1.0,)),
                            Harmonic(2, (0.0, c07), (0.0, -s07))),
                           (0.0, 0.48), (math.pi / 2, 0.5))
