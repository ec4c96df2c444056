"""Bag-of-words ingestion and two-group document comparison.

Documents are token-count maps; a comparison samples documents from each
group, builds the union dictionary over the sampled documents only, and
aggregates per-token counts into a two-sample count table. The
neighborhood study repeats that over replications, producing shifted
p-value curves in a power mode (group 1 vs group 2) and a size mode (two
disjoint pseudo-groups drawn from group 1 alone).
"""

from __future__ import annotations

import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import TwoSampleCounts, make_two_sample, std_normal_quantile, std_normal_sf
from .errors import DegenerateVarianceError, DomainError, InsufficientDocumentsError
from .stats import proposed_statistic

__all__ = [
    "DocumentGroup",
    "CorpusComparison",
    "CorpusStudyResult",
    "tokenize",
    "count_tokens",
    "load_document_group",
    "build_comparison",
    "corpus_neighborhood_study",
]

# Maximal runs of alphanumeric characters; underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str | bytes) -> list[str]:
    """Lowercase and split on maximal runs of non-alphanumeric characters.

    Bytes are decoded as UTF-8 with invalid sequences replaced, never
    raising on encoding problems.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    return _TOKEN_RE.findall(text.lower())


def count_tokens(text: str | bytes) -> dict[str, int]:
    """Token counts of one document; zero-count entries never appear."""
    return dict(Counter(tokenize(text)))


@dataclass(frozen=True)
class DocumentGroup:
    """A labeled collection of documents, each a token -> count map."""

    documents: tuple[Mapping[str, int], ...]
    label: str
    doc_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        docs = tuple(dict(d) for d in self.documents)
        for d in docs:
            for token, count in d.items():
                if not isinstance(count, int) or count <= 0:
                    raise DomainError(
                        f"token count for {token!r} must be a positive integer"
                    )
        ids = tuple(self.doc_ids) or tuple(str(i) for i in range(len(docs)))
        if len(ids) != len(docs):
            raise DomainError("doc_ids must parallel documents")
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "doc_ids", ids)

    def __len__(self) -> int:
        return len(self.documents)


def load_document_group(path: str | Path, label: str | None = None) -> DocumentGroup:
    """Read every regular file in a directory as one plain-text document.

    Files are taken in sorted name order so ingestion is deterministic.
    """
    root = Path(path)
    if not root.is_dir():
        raise InsufficientDocumentsError(f"{root} is not a directory")
    files = sorted(p for p in root.iterdir() if p.is_file())
    if not files:
        raise InsufficientDocumentsError(f"{root} contains no documents")
    documents = []
    for f in files:
        documents.append(count_tokens(f.read_bytes()))
    return DocumentGroup(
        documents=tuple(documents),
        label=label if label is not None else root.name,
        doc_ids=tuple(f.name for f in files),
    )


@dataclass(frozen=True)
class CorpusComparison:
    """One sampled two-group comparison over a shared union dictionary."""

    dictionary: tuple[str, ...]
    counts: TwoSampleCounts
    sampled_doc_ids: tuple[tuple[str, ...], tuple[str, ...]]


def _sample_indices(
    group: DocumentGroup, sample_size: int | None, stream: np.random.Generator
) -> np.ndarray:
    if sample_size is None:
        return np.arange(len(group))
    if sample_size < 1:
        raise InsufficientDocumentsError("sample size must be positive")
    if sample_size > len(group):
        raise InsufficientDocumentsError(
            f"group {group.label!r} has {len(group)} documents, "
            f"cannot sample {sample_size}"
        )
    return stream.choice(len(group), size=sample_size, replace=False)


def _aggregate(group: DocumentGroup, indices: np.ndarray) -> Counter:
    total: Counter = Counter()
    for i in indices:
        total.update(group.documents[int(i)])
    return total


def _comparison_from_counters(
    totals1: Counter,
    totals2: Counter,
    ids1: tuple[str, ...],
    ids2: tuple[str, ...],
) -> CorpusComparison:
    dictionary = tuple(sorted(set(totals1) | set(totals2)))
    c1 = np.array([totals1.get(t, 0) for t in dictionary], dtype=np.int64)
    c2 = np.array([totals2.get(t, 0) for t in dictionary], dtype=np.int64)
    return CorpusComparison(
        dictionary=dictionary,
        counts=make_two_sample(c1, c2),
        sampled_doc_ids=(ids1, ids2),
    )


def build_comparison(
    g1: DocumentGroup,
    g2: DocumentGroup,
    sample_size: int | None,
    stream: np.random.Generator,
) -> CorpusComparison:
    """Sample documents without replacement and build the count table.

    ``sample_size=None`` uses every document, making the result
    independent of the stream. The dictionary is the sorted union of
    tokens over the sampled documents only.
    """
    idx1 = _sample_indices(g1, sample_size, stream)
    idx2 = _sample_indices(g2, sample_size, stream)
    return _comparison_from_counters(
        _aggregate(g1, idx1),
        _aggregate(g2, idx2),
        tuple(g1.doc_ids[int(i)] for i in idx1),
        tuple(g2.doc_ids[int(i)] for i in idx2),
    )


@dataclass(frozen=True)
class CorpusStudyResult:
    """Per-replication shifted p-value curves and their means.

    ``power_curves`` and ``size_curves`` have one row per replication
    (NaN rows mark replications whose variance estimate degenerated);
    ``statistic`` and ``delta_star`` arrays are parallel to the rows.
    """

    deltas: np.ndarray
    power_curves: np.ndarray
    size_curves: np.ndarray
    power_statistics: np.ndarray
    size_statistics: np.ndarray
    power_delta_star: np.ndarray
    size_delta_star: np.ndarray
    alpha: float

    @property
    def power_mean(self) -> np.ndarray:
        return np.nanmean(self.power_curves, axis=0)

    @property
    def size_mean(self) -> np.ndarray:
        return np.nanmean(self.size_curves, axis=0)

    @property
    def degenerate_replications(self) -> int:
        return int(
            np.isnan(self.power_statistics).sum()
            + np.isnan(self.size_statistics).sum()
        )


def corpus_neighborhood_study(
    g1: DocumentGroup,
    g2: DocumentGroup,
    sample_size: int,
    replications: int,
    alpha: float,
    deltas: Sequence[float] | np.ndarray,
    seed: int,
    threads: int = 1,
) -> CorpusStudyResult:
    """Resample documents and trace shifted p-value curves.

    Each replication r derives two streams from (seed, r): the power mode
    samples ``sample_size`` documents from each group; the size mode
    samples ``2 * sample_size`` documents from group 1 alone and splits
    them into disjoint pseudo-groups. Replications are independent, so the
    result is identical for any thread count.
    """
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.ndim != 1 or deltas.size == 0:
        raise DomainError("delta grid must be a non-empty 1-D sequence")
    if np.any(deltas < 0) or np.any(np.diff(deltas) <= 0):
        raise DomainError("delta grid must be nonnegative and increasing")
    if replications < 1:
        raise DomainError("replications must be positive")
    if sample_size > len(g1) or sample_size > len(g2):
        raise InsufficientDocumentsError(
            "sample size exceeds a group's document count"
        )
    if 2 * sample_size > len(g1):
        raise InsufficientDocumentsError(
            f"size mode needs at least {2 * sample_size} documents in "
            f"group {g1.label!r}, found {len(g1)}"
        )

    z_alpha = std_normal_quantile(1.0 - alpha)
    n_d = deltas.size
    power_curves = np.full((replications, n_d), np.nan)
    size_curves = np.full((replications, n_d), np.nan)
    power_stats = np.full(replications, np.nan)
    size_stats = np.full(replications, np.nan)
    power_dstar = np.full(replications, np.nan)
    size_dstar = np.full(replications, np.nan)

    def one_mode(comparison: CorpusComparison):
        t = proposed_statistic(comparison.counts).T
        return t, std_normal_sf(t - deltas), max(0.0, t - z_alpha)

    def run_range(indices: np.ndarray) -> None:
        for r in indices:
            power_rng = np.random.default_rng((seed, int(r), 0))
            cmp_power = build_comparison(g1, g2, sample_size, power_rng)
            size_rng = np.random.default_rng((seed, int(r), 1))
            both = _sample_indices(g1, 2 * sample_size, size_rng)
            half_a, half_b = both[:sample_size], both[sample_size:]
            cmp_size = _comparison_from_counters(
                _aggregate(g1, half_a),
                _aggregate(g1, half_b),
                tuple(g1.doc_ids[int(i)] for i in half_a),
                tuple(g1.doc_ids[int(i)] for i in half_b),
            )
            for cmp_, curves, stats_, dstars in (
                (cmp_power, power_curves, power_stats, power_dstar),
                (cmp_size, size_curves, size_stats, size_dstar),
            ):
                try:
                    t, curve, dstar = one_mode(cmp_)
                except DegenerateVarianceError:
                    continue
                curves[r] = curve
                stats_[r] = t
                dstars[r] = dstar

    chunks = [
        c for c in np.array_split(np.arange(replications), threads) if c.size
    ]
    if len(chunks) == 1:
        run_range(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            list(pool.map(run_range, chunks))

    return CorpusStudyResult(
        deltas=deltas,
        power_curves=power_curves,
        size_curves=size_curves,
        power_statistics=power_stats,
        size_statistics=size_stats,
        power_delta_star=power_dstar,
        size_delta_star=size_dstar,
        alpha=alpha,
    )
