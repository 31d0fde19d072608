import pytest

from eegbench import synthetic


@pytest.fixture(scope="session")
def corpus_root(tmp_path_factory):
    """A full 5x100 synthetic corpus in the Bonn directory layout."""
    root = tmp_path_factory.mktemp("bonn")
    synthetic.write_corpus(root, seed=0)
    return root
