import pytest

from sketchsearch.corpus import ingest
from sketchsearch.synth import synthetic_index, write_demo_corpus


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    """A small on-disk corpus with images and the planted walkthrough screen."""
    root = tmp_path_factory.mktemp("demo_corpus")
    write_demo_corpus(root, n_screens=20, seed=7)
    return root


@pytest.fixture(scope="session")
def demo_index(demo_dir):
    return ingest(demo_dir)


@pytest.fixture(scope="session")
def small_index():
    """100 synthetic screens, no disk round-trip."""
    return synthetic_index(100, seed=11)
