import numpy as np
import pytest

from pmivec import build_vocab, encode_corpus


def make_random_corpus(rng, num_types, num_tokens, num_sentences=None,
                       zipf=True):
    """Random token sentences over ``num_types`` type names w0..w{n-1}."""
    if num_sentences is None:
        num_sentences = max(1, num_tokens // 12)
    if zipf:
        weights = 1.0 / np.arange(1, num_types + 1)
        weights /= weights.sum()
    else:
        weights = np.full(num_types, 1.0 / num_types)
    lengths = rng.integers(1, max(2, 2 * num_tokens // num_sentences),
                           size=num_sentences)
    sentences = []
    for n in lengths:
        picks = rng.choice(num_types, size=n, p=weights)
        sentences.append([f"w{i}" for i in picks])
    return sentences


def build_id_corpus(sentences, min_count=1):
    """Vocabulary plus id-encoded sentences for a token corpus."""
    vocab = build_vocab([t for s in sentences for t in s], min_count=min_count)
    return vocab, encode_corpus(sentences, vocab)


@pytest.fixture
def toy_world():
    """|V|=20 clustered corpus of ~5000 tokens with its vocabulary."""
    rng = np.random.default_rng(2024)
    sentences = []
    for _ in range(500):
        base = int(rng.integers(0, 2)) * 10
        sentences.append([f"w{base + rng.integers(0, 10)}" for _ in range(10)])
    vocab, ids = build_id_corpus(sentences)
    assert len(vocab) == 20
    return vocab, ids


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") == "call":
                name = nodeid.split("::")[-1]
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
