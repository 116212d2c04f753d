"""Generalized Richardson extrapolation with known error exponents."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from ..errors import ParameterError


@dataclass(frozen=True)
class Extrapolation:
    """Result of a Richardson table.

    Attributes:
        value: Most extrapolated estimate.
        indicator: Relative change between the last two diagonal entries.
        table: Rows of the table; row k holds the estimates using samples 0..k.
    """

    value: complex
    indicator: float
    table: tuple[tuple[complex, ...], ...]


def richardson(
    samples: Sequence[complex], exponents: Sequence[float], ratio: float = 2.0
) -> Extrapolation:
    """Extrapolate ``g(h) = L + sum_j c_j h^{p_j}`` to h -> 0.

    Args:
        samples: ``g(h_k)`` on a geometric sequence ``h_k = h_0 / ratio**k``.
        exponents: Error exponents ``p_1 < p_2 < ...``; the first
            ``len(samples) - 1`` are eliminated in order.
        ratio: Refinement ratio between successive samples.

    Raises:
        ParameterError: If there are fewer exponents than eliminations.
    """
    if len(samples) < 1:
        raise ParameterError("samples", len(samples), "need at least one sample")
    if len(exponents) < len(samples) - 1:
        raise ParameterError(
            "exponents", len(exponents), f"need {len(samples) - 1} for {len(samples)} samples"
        )
    table: list[list[complex]] = []
    for k, g in enumerate(samples):
        row = [complex(g)]
        for j in range(1, k + 1):
            factor = ratio ** exponents[j - 1]
            row.append((factor * row[j - 1] - table[k - 1][j - 1]) / (factor - 1.0))
        table.append(row)
    value = table[-1][-1]
    if len(table) > 1:
        previous = table[-2][-1]
        indicator = abs(value - previous) / max(abs(value), 1e-300)
    else:
        indicator = float("inf")
    return Extrapolation(value, indicator, tuple(tuple(r) for r in table))


def merged_exponents(*families: Sequence[float], limit: int = 16) -> list[float]:
    """Sorted union of exponent families, duplicates removed."""
    merged = sorted({round(p, 12) for family in families for p in family})
    return merged[:limit]
