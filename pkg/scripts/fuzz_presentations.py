"""Random presentations: Euler identity and class-sign symmetry of b_i."""

from __future__ import annotations

from pathlib import Path
import sys

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.novikov import compute_numbers
from novikov_probe.presentation import FreeWord
from novikov_probe.presentation import Presentation
from novikov_probe.presentation import validate_character


def random_presentation(rng: np.random.Generator) -> Presentation:
    n_generators = int(rng.integers(1, 5))
    relators = []
    for _ in range(int(rng.integers(0, 4))):
        length = int(rng.integers(1, 13))
        letters = tuple(
            (int(gen), int(sign))
            for gen, sign in zip(
                rng.integers(0, n_generators, size=length),
                rng.choice([-1, 1], size=length),
            )
        )
        relators.append(FreeWord(letters) * FreeWord.identity())
    names = tuple(f"x{i}" for i in range(n_generators))
    return Presentation(generators=names, relators=tuple(relators))


def main(trials: int = 200) -> None:
    rng = np.random.default_rng(42)
    checked = 0
    while checked < trials:
        pres = random_presentation(rng)
        basis = pres.character_lattice_basis()
        if not basis:
            continue
        coeffs = rng.integers(-2, 3, size=len(basis))
        row = coeffs @ np.array(basis, dtype=np.int64)
        if not row.any():
            continue
        xi = validate_character(pres, [[int(v) for v in row]])
        forward = compute_numbers(assemble_presentation_complex(pres, xi))
        backward = compute_numbers(assemble_presentation_complex(pres, xi.negated()))
        alternating = sum((-1) ** i * b for i, b in enumerate(forward.betti))
        if alternating != pres.euler_characteristic or forward.betti != backward.betti:
            raise SystemExit(f"Mismatch on {pres}: {forward.betti} vs {backward.betti}")
        checked += 1
    print(f"Checked {checked} random presentations.")


if __name__ == "__main__":
    main()
