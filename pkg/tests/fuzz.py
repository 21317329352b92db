"""Seeded text mutations of scenario files, shared by the CLI tests and the acceptance suite."""

import random
from pathlib import Path

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
ALPHABET = "abcxyzEOPAX0123456789()[]{},;:=+-*^/>_ #\n\t'\"\\.é∞"


def corpus() -> list[str]:
    return [p.read_text(encoding="utf-8") for p in sorted(SCENARIOS.glob("*.dgvc"))]


def mutate(text: str, rng: random.Random) -> str:
    for _ in range(rng.randint(1, 4)):
        n = len(text)
        op = rng.randrange(6)
        i = rng.randrange(n + 1)
        if op == 0 and n:
            text = text[:i] + text[i + 1:]
        elif op == 1:
            text = text[:i] + rng.choice(ALPHABET) + text[i:]
        elif op == 2 and n:
            j = min(n, i + rng.randint(1, 12))
            text = text[:i] + text[i:j] * 2 + text[j:]
        elif op == 3 and n:
            j = min(n, i + rng.randint(1, 20))
            text = text[:i] + text[j:]
        elif op == 4:
            text = text[:i]
        else:
            k = rng.randrange(n + 1)
            a, b = sorted((i, k))
            text = text[:a] + text[b:] + text[a:b]
    return text
