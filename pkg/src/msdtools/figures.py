"""Bar charts written next to the delimited reports (Agg backend, files only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

TOP_MSDS = 40


def _bars(ax, labels, series):
    width = 0.8 / max(len(series), 1)
    for k, (name, values) in enumerate(series):
        xs = [i + (k - (len(series) - 1) / 2) * width for i in range(len(labels))]
        ax.bar(xs, values, width, label=name)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90 if len(labels) > 12 else 0, fontsize=8)
    if len(series) > 1:
        ax.legend(fontsize=8)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def spec_stats_figure(stats, path):
    """Attributes, values and languages per category."""
    fig, ax = plt.subplots(figsize=(max(5, 0.6 * len(stats)), 3.5))
    _bars(ax, [s.code for s in stats], [
        ("attributes", [s.attributes for s in stats]),
        ("values", [s.values for s in stats]),
        ("languages", [s.languages for s in stats]),
    ])
    ax.set_xlabel("category")
    ax.set_ylabel("count")
    return _save(fig, path)


def corpus_stats_figure(stats, path):
    """Word and punctuation tokens per top-level division."""
    ids = list(stats.divisions)
    fig, ax = plt.subplots(figsize=(max(5, 0.5 * len(ids)), 3.5))
    _bars(ax, ids, [
        ("words", [stats.divisions[i].words for i in ids]),
        ("punctuation", [stats.divisions[i].punctuation for i in ids]),
    ])
    ax.set_xlabel("division")
    ax.set_ylabel("tokens")
    return _save(fig, path)


def msd_frequency_figure(entries, path, top=TOP_MSDS):
    """Token frequency of the most frequent MSDs of an index."""
    counted = [e for e in entries if e.token_count is not None]
    counted.sort(key=lambda e: (-e.token_count, e.msd))
    counted = counted[:top]
    fig, ax = plt.subplots(figsize=(max(5, 0.3 * len(counted)), 3.5))
    _bars(ax, [e.msd for e in counted], [("tokens", [e.token_count for e in counted])])
    ax.set_xlabel("MSD")
    ax.set_ylabel("tokens")
    return _save(fig, path)
