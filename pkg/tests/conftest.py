import pytest

import delaybif as db

# Degenerate-point reference values, frozen from converged runs that were
# cross-checked against finite differences of the characteristic roots
# (see test_normalform oracles).
SIS1 = {
    "lam": 1.78401924967949,
    "mu": 2.61303902576754,
    "ybar": 0.178305403423333,
    "alpha": -0.216997171657435,
    "beta": -0.317834058194116,
    "omega": 0.232229877579984,
    "sigma1": 0.0207470057462444,
    "sigma4": -0.0371173548562936,
    "K1": -1.00926061279656,
    "eta_slope": -0.0205566386750757,
    "bubble_coeff": 1.49526855317237,
}
SIS2 = {
    "lam": 2.14738612049932,
    "mu": 1.66174896863591,
    "ybar": 0.270286415690154,
    "alpha": -0.370400690766621,
    "beta": -0.44914817250941,
    "omega": 0.254042140496715,
    "sigma1": 0.0502733769972901,
    "sigma4": -0.0123745646428464,
    "K1": -0.490510538842996,
    "eta_slope": -0.102491940572518,
    "bubble_coeff": 4.03119735861493,
}


@pytest.fixture(scope="session")
def sis1():
    return db.get_builtin("sis-inverse")


@pytest.fixture(scope="session")
def sis2():
    return db.get_builtin("sis-exp")


@pytest.fixture(scope="session")
def rep1(sis1):
    return db.analyze(sis1, (1.8, 2.6))


@pytest.fixture(scope="session")
def rep2(sis2):
    return db.analyze(sis2, (2.1, 1.7))
