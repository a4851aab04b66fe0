"""Intrinsic evaluation: word similarity and analogy benchmarks.

Similarity tasks score word pairs by cosine similarity and report the
tie-corrected Spearman rank correlation against the human judgments.
Analogy questions "a is to a* as b is to ?" are answered by scanning the
whole vocabulary (query words excluded) with either the additive or the
multiplicative cosine objective.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import EvaluationError, ParseError

logger = logging.getLogger(__name__)

METHOD_3COSADD = "3CosAdd"
METHOD_3COSMUL = "3CosMul"
ANALOGY_METHODS = (METHOD_3COSADD, METHOD_3COSMUL)

# Multiplicative objective: cosines are shifted to [0, 1] via (x + 1) / 2 and
# the divisor is cushioned by this epsilon.
EPSILON_3COSMUL = 1e-3


def spearman(x, y) -> float:
    """Tie-corrected Spearman correlation: average ranks, then Pearson."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if len(x) < 2:
        raise EvaluationError("need at least two observations")
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        raise EvaluationError("undefined correlation: an input has no rank variance")
    return float(np.corrcoef(rx, ry)[0, 1])


def _normalize_rows(matrix):
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms == 0, 1.0, norms)
    return matrix / safe


def _lookup(vs, word, lowercase):
    key = word.lower() if lowercase else word
    return vs.ids.get(key)


@dataclass
class SimilarityResult:
    rho: float
    coverage: float
    used: int
    total: int
    oov_pairs: int
    zero_norm_pairs: int


def eval_similarity(vs, pairs, lowercase: bool = True,
                    strict_oov: bool = False) -> SimilarityResult:
    """Spearman correlation of model cosines against human scores.

    Pairs with an out-of-vocabulary word are skipped and counted against
    coverage; with ``strict_oov`` they are scored with similarity 0 instead.
    Pairs involving a zero-norm vector are always skipped (cosine undefined)
    and tracked in ``zero_norm_pairs``.
    """
    if not pairs:
        raise EvaluationError("empty similarity dataset")
    normed = _normalize_rows(vs.vectors)
    sims, gold = [], []
    oov = zero_norm = 0
    for w1, w2, score in pairs:
        i = _lookup(vs, w1, lowercase)
        j = _lookup(vs, w2, lowercase)
        if i is None or j is None:
            oov += 1
            if strict_oov:
                sims.append(0.0)
                gold.append(score)
            continue
        if not np.any(vs.vectors[i]) or not np.any(vs.vectors[j]):
            zero_norm += 1
            logger.warning("skipping pair (%s, %s): zero-norm vector", w1, w2)
            continue
        sims.append(float(normed[i] @ normed[j]))
        gold.append(score)
    if not sims:
        raise EvaluationError("no pair is covered by the vocabulary")
    coverage = (len(pairs) - oov - zero_norm) / len(pairs)
    return SimilarityResult(rho=spearman(sims, gold), coverage=coverage,
                            used=len(sims), total=len(pairs),
                            oov_pairs=oov, zero_norm_pairs=zero_norm)


def _analogy_scores(normed, ia, ia_star, ib, method):
    sim_a = normed @ normed[ia]
    sim_a_star = normed @ normed[ia_star]
    sim_b = normed @ normed[ib]
    if method == METHOD_3COSADD:
        scores = sim_a_star - sim_a + sim_b
    elif method == METHOD_3COSMUL:
        scores = (((sim_a_star + 1) / 2) * ((sim_b + 1) / 2)
                  / ((sim_a + 1) / 2 + EPSILON_3COSMUL))
    else:
        raise ValueError(f"unknown method {method!r}; choose {ANALOGY_METHODS}")
    scores[[ia, ia_star, ib]] = -np.inf
    return scores


def solve_analogy(vs, a, a_star, b, method: str = METHOD_3COSADD) -> str:
    """Predict the word completing ``a : a_star :: b : ?``.

    All vectors are unit-normalized first; the query words themselves are
    excluded from the candidates and exact score ties resolve to the lowest
    word id. Raises ``KeyError`` for an out-of-vocabulary query word.
    """
    normed = _normalize_rows(vs.vectors)
    scores = _analogy_scores(normed, vs.ids[a], vs.ids[a_star], vs.ids[b], method)
    return vs.words[int(np.argmax(scores))]


@dataclass
class AnalogyResult:
    accuracy: float
    coverage: float
    correct: int
    used: int
    total: int
    by_section: dict = field(default_factory=dict)


def eval_analogy(vs, questions, method: str = METHOD_3COSADD,
                 lowercase: bool = True, strict_oov: bool = False) -> AnalogyResult:
    """Accuracy over analogy questions, overall and per section.

    Questions with any out-of-vocabulary word are skipped and counted
    against coverage; with ``strict_oov`` they count as answered wrongly
    instead (the accuracy denominator becomes the full question count).
    """
    if not questions:
        raise EvaluationError("empty analogy dataset")
    normed = _normalize_rows(vs.vectors)
    per_section = {}
    correct = covered = 0
    for section, a, a_star, b, expected in questions:
        sec = per_section.setdefault(section, [0, 0])  # [correct, covered]
        idx = [_lookup(vs, wrd, lowercase) for wrd in (a, a_star, b, expected)]
        if any(i is None for i in idx):
            continue
        covered += 1
        sec[1] += 1
        scores = _analogy_scores(normed, idx[0], idx[1], idx[2], method)
        if int(np.argmax(scores)) == idx[3]:
            correct += 1
            sec[0] += 1
    if covered == 0 and not strict_oov:
        raise EvaluationError("no question is covered by the vocabulary")
    total = len(questions)
    denom = total if strict_oov else covered
    sections = {}
    for section, (sec_correct, sec_covered) in per_section.items():
        sec_total = sum(1 for q in questions if q[0] == section)
        sec_denom = sec_total if strict_oov else sec_covered
        sections[section] = (sec_correct / sec_denom if sec_denom else float("nan"),
                             sec_covered / sec_total)
    return AnalogyResult(accuracy=correct / denom, coverage=covered / total,
                         correct=correct, used=covered, total=total,
                         by_section=sections)


def load_similarity_dataset(path):
    """Lines of ``word1 word2 score`` (whitespace-separated); ``#`` comments."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if line.startswith("#") or not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(path, line_no, "expected 'word1 word2 score'")
            try:
                score = float(parts[2])
            except ValueError:
                raise ParseError(path, line_no, f"bad score {parts[2]!r}") from None
            pairs.append((parts[0], parts[1], score))
    return pairs


def load_analogy_dataset(path):
    """Google-format analogy file: ``: section`` headers, then ``a a* b b*``
    question lines. Returns (section, a, a*, b, b*) tuples."""
    questions = []
    section = "default"
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if line.startswith(":"):
                section = line[1:].strip() or "default"
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(path, line_no, "expected 'a a* b b*'")
            questions.append((section, *parts))
    return questions


def format_report(entries) -> str:
    """Render result rows as an aligned table followed by machine-readable
    ``dataset<TAB>metric<TAB>value<TAB>coverage`` lines.

    Each entry is a (dataset, metric, value, coverage) tuple.
    """
    header = ("dataset", "metric", "value", "coverage")
    rows = [(str(d), str(m), f"{v:.4f}", f"{cov:.3f}")
            for d, m, v, cov in entries]
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    lines.append("")
    for d, m, v, cov in entries:
        lines.append(f"{d}\t{m}\t{v:.6f}\t{cov:.6f}")
    return "\n".join(lines)
