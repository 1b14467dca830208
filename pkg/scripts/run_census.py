"""Barrido en X del censo para n = 3: ambos estratos y la familia grande."""
import json
import logging
from pathlib import Path

from src.census.census import census_sweep, sweep_frame
from src.local.families import FamilySpec, PrimeCondition

logger = logging.getLogger(__name__)

OUTPUT_DIR = Path("reports")
SWEEP = [4, 6, 8, 10, 12]
SAMPLES = 1_000_000
SEED = 20240601

# lambda unidad en 2 e inv(B) = x^3 + 2x + 1 mod 3
BIG_FAMILY = FamilySpec(
    name="unit-at-2-residue-mod-3",
    conditions=[
        PrimeCondition(p=2, kind="unit-lambda"),
        PrimeCondition(p=3, kind="inv-in", residues=[(0, 2, 1)]),
    ],
)


def run_sweep(r, family=None, label="full"):
    reports = census_sweep(3, r, SWEEP, family=family, samples=SAMPLES, seed=SEED)
    frame = sweep_frame(reports)
    OUTPUT_DIR.mkdir(exist_ok=True)
    frame.to_csv(OUTPUT_DIR / f"census_n3_r{r}_{label}.csv", index=False)
    with open(OUTPUT_DIR / f"census_n3_r{r}_{label}.json", "w") as fh:
        json.dump([rep.to_json() for rep in reports], fh, indent=2, default=str)

    print(f"\n>>> n=3, r={r}, familia {label}")
    print(frame.to_string(index=False))
    ratios = frame["ratio"].dropna().tolist()
    if ratios:
        print(f"  razon final: {ratios[-1]:.4f}")
    return frame


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    print("=" * 60)
    print("CENSO n = 3")
    print("=" * 60)
    for r in (1, 3):
        run_sweep(r)
        run_sweep(r, BIG_FAMILY, "big-family")
