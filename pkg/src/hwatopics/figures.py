"""Figures for detection, evaluation and tuning runs.

Each function draws one figure, saves it to `path` and returns the path.
"""

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
import seaborn as sns  # noqa: E402

plt.style.use('seaborn-v0_8-whitegrid')

COLORS = {
    'primary': '#2C3E50',
    'secondary': '#7F8C8D',
    'highlight': '#27AE60',
    'cluster': '#3498DB',
    'fallback': '#E67E22',
}


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches='tight', facecolor='white', edgecolor='none')
    plt.close(fig)
    return path


def plot_tuning_heatmap(grid: pd.DataFrame, path: Path) -> Path:
    """Keyword F1 over the h x delta grid produced by `tune`."""
    table = grid.pivot(index='h', columns='delta', values='keyword_f1').sort_index()
    fig, ax = plt.subplots(figsize=(10, 7))
    sns.heatmap(table, annot=True, fmt='.3f', cmap='viridis', ax=ax,
                cbar_kws={'label': 'Keyword F1'})
    ax.set_xlabel('Damping factor \u03b4')
    ax.set_ylabel('Keyword rate h (%)')
    ax.set_title('Keyword F1 by parameter setting', fontweight='bold')
    return _save(fig, path)


def plot_topk_recall(curve: Mapping[int, float], path: Path) -> Path:
    """Top-k topic recall as k grows."""
    ks = list(curve)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(ks, [curve[k] for k in ks], marker='o', color=COLORS['primary'],
            linewidth=2)
    ax.set_xticks(ks)
    ax.set_ylim(0, 1.05)
    ax.set_xlabel('k (topics reported per window)')
    ax.set_ylabel('Topic recall')
    ax.set_title('Top-k topic recall', fontweight='bold')
    return _save(fig, path)


def plot_topic_frequencies(records: Sequence[dict], path: Path, max_topics: int = 12) -> Path:
    """Horizontal bars of keyword frequencies, one panel per topic.

    `records` are word-frequency records ({"window", "rank", "frequencies"}).
    """
    shown = list(records)[:max_topics]
    n = max(len(shown), 1)
    cols = min(n, 3)
    rows = -(-n // cols)
    fig, axes = plt.subplots(rows, cols, figsize=(5 * cols, 3.5 * rows), squeeze=False)
    for ax, record in zip(axes.flat, shown):
        freqs = record['frequencies']
        words = list(freqs)[::-1]
        ax.barh(words, [freqs[w] for w in words], color=COLORS['cluster'])
        ax.set_title(f"Window {record['window']} \u00b7 topic {record['rank']}", fontsize=10)
        ax.set_xlabel('Term frequency')
    for ax in list(axes.flat)[len(shown):]:
        ax.axis('off')
    fig.tight_layout()
    return _save(fig, path)
