"""Write the BS(1,2) chain complex fixture (.json)."""

from __future__ import annotations

import json
from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from novikov_probe.chain import dump_complex
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import validate_character


def main() -> None:
    out_dir = Path("artifacts")
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "bs12_complex.json"

    pres = parse_presentation("<a, b | a b a^-1 = b^2>")
    complex_ = assemble_presentation_complex(pres, validate_character(pres, [[1, 0]]))
    out_path.write_text(json.dumps(dump_complex(complex_), indent=2) + "\n", encoding="utf-8")
    print(f"Wrote fixture: {out_path}")


if __name__ == "__main__":
    main()
