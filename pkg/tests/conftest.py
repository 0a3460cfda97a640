from pathlib import Path

import numpy as np
import pytest

from repvar import cohomology, corpus, repspace

CORPUS_DIR = Path(__file__).resolve().parents[1] / "corpus"


def corpus_files():
    return sorted(CORPUS_DIR.glob("*.grp"))


@pytest.fixture(scope="session")
def torus_pres():
    return corpus.load("torus_puncture")


@pytest.fixture(scope="session")
def sphere3_pres():
    return corpus.load("sphere3")


@pytest.fixture(scope="session")
def sphere4_pres():
    return corpus.load("sphere4")


@pytest.fixture(scope="session")
def genus2_pres():
    return corpus.load("genus2")


@pytest.fixture(scope="session")
def torus_rep():
    return corpus.torus_puncture_representation()


@pytest.fixture(scope="session")
def genus2_irr(genus2_pres):
    # generic Haar starts at a closed-surface group give irreducible points
    for seed in range(2, 8):
        rep = repspace.find_representation(genus2_pres, seed=seed, attempts=20,
                                           target_tolerance=1e-12)
        if repspace.commutant_dimension(rep) == 1:
            return rep
    raise RuntimeError("no irreducible genus-2 representation found")


@pytest.fixture(scope="session")
def genus2_red():
    return corpus.genus2_reducible()


@pytest.fixture(scope="session")
def sphere3_rep(sphere3_pres):
    return repspace.find_representation(sphere3_pres, seed=1, attempts=50,
                                        target_tolerance=1e-11)


@pytest.fixture(scope="session")
def sphere4_rep(sphere4_pres):
    return repspace.find_representation(sphere4_pres, seed=1, attempts=50,
                                        target_tolerance=1e-11)


@pytest.fixture(scope="session")
def torus_cc(torus_rep):
    return cohomology.assemble_complex(torus_rep)


@pytest.fixture(scope="session")
def genus2_irr_cc(genus2_irr):
    return cohomology.assemble_complex(genus2_irr)


@pytest.fixture(scope="session")
def genus2_red_cc(genus2_red):
    return cohomology.assemble_complex(genus2_red)


@pytest.fixture(scope="session")
def sphere3_cc(sphere3_rep):
    return cohomology.assemble_complex(sphere3_rep)


@pytest.fixture(scope="session")
def sphere4_cc(sphere4_rep):
    return cohomology.assemble_complex(sphere4_rep)


@pytest.fixture(scope="session")
def corpus_points(torus_rep, genus2_irr, genus2_red, sphere3_rep, sphere4_rep):
    """Named (representation, cone complex) pairs covering the whole corpus."""
    return {
        "torus_puncture": torus_rep,
        "genus2_irr": genus2_irr,
        "genus2_red": genus2_red,
        "sphere3": sphere3_rep,
        "sphere4": sphere4_rep,
    }


def random_cocycle(cc, basis, rng, scale=1.0):
    """Random combination of basis cocycles with unit (then scaled) coefficients."""
    coeffs = rng.standard_normal(len(basis))
    coeffs *= scale / np.linalg.norm(coeffs)
    uvec = basis.matrix @ coeffs
    return cc.unstack_gen(uvec)
