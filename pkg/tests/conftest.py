import numpy as np
import pytest

from conesparse.barriers import Orthant, Product, Psd, SecondOrder, SpectralEpigraph

CATALOGUE = {
    "orthant5": Orthant(5),
    "psd3": Psd(3),
    "psd4": Psd(4),
    "soc4": SecondOrder(4),
    "se42": SpectralEpigraph(4, 2),
    "se42_kplus1": SpectralEpigraph(4, 2, barrier="kplus1"),
    "product": Product((Psd(3), Orthant(2))),
}
PAIRWISE = {k: v for k, v in CATALOGUE.items() if v.pairwise}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(CATALOGUE), ids=str)
def cone(request):
    return CATALOGUE[request.param]


@pytest.fixture(params=sorted(PAIRWISE), ids=str)
def pairwise_cone(request):
    return PAIRWISE[request.param]
