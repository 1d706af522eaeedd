import pytest

from talentsearch.expertise import build_expertise
from talentsearch.features import FeatureModels
from talentsearch.retrieval import build_index
from talentsearch.synth import SynthConfig, build_taxonomy, generate_corpus, generate_priors


@pytest.fixture(scope="session")
def dictionaries():
    return build_taxonomy(seed=0)


@pytest.fixture(scope="session")
def corpus(dictionaries):
    return generate_corpus(SynthConfig(n_members=800), seed=1, dictionaries=dictionaries)


@pytest.fixture(scope="session")
def expertise(corpus, dictionaries):
    return build_expertise(corpus, dictionaries)


@pytest.fixture(scope="session")
def index(corpus):
    return build_index(corpus)


@pytest.fixture(scope="session")
def priors(corpus):
    return generate_priors(corpus, seed=3)


@pytest.fixture(scope="session")
def feature_models(dictionaries, priors):
    return FeatureModels(dictionaries=dictionaries, priors=priors)
