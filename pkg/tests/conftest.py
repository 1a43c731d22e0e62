import numpy as np
import pytest

from phonembed.cache import ArticulatoryDistance
from phonembed.lexicon import Lexicon, make_entry
from phonembed.phonology import bundled_table
from phonembed.synth import cognate_corpus


@pytest.fixture(scope="session")
def table():
    return bundled_table()


@pytest.fixture(scope="session")
def dist(table):
    return ArticulatoryDistance(table)


WORDS = [
    ("cat", "kæt", "ˈkæt"),
    ("bat", "bæt", "ˈbæt"),
    ("pat", "pæt", "ˈpæt"),
    ("hat", "hæt", "ˈhæt"),
    ("chat", "tʃæt", "ˈtʃæt"),
    ("grown", "ɡɹoʊn", "ˈɡɹoʊn"),
    ("loan", "loʊn", "ˈloʊn"),
    ("ocean", "oʊʃən", "ˈoʊʃən"),
    ("motion", "moʊʃən", "ˈmoʊʃən"),
    ("soybean", "sɔɪbin", "ˈsɔɪbin"),
    ("din", "dɪn", "ˈdɪn"),
    ("tin", "tɪn", "ˈtɪn"),
    ("zin", "zɪn", "ˈzɪn"),
    ("sin", "sɪn", "ˈsɪn"),
    ("plant", "plænt", "ˈplænt"),
    ("slant", "slænt", "ˈslænt"),
    ("plots", "plɑts", "ˈplɑts"),
    ("plane", "plen", "ˈplen"),
]


@pytest.fixture(scope="session")
def small_lexicon(table):
    return Lexicon([make_entry(o, ipa, table, "en", stress_ipa=s) for o, ipa, s in WORDS], "en")


@pytest.fixture(scope="session")
def corpus():
    """2,000-word pseudo-English plus a sister language with 1,000 cognates."""
    return cognate_corpus(2000, 1000, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from tests.test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
