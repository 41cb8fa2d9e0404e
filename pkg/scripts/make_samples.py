"""Regenerate the bundled sample sequences in src/skelcodec/samples/."""

from pathlib import Path

from skelcodec.document import save_sequence
from skelcodec.synth import GenConfig, generate, mode_switch_example

OUT = Path(__file__).resolve().parents[1] / "src" / "skelcodec" / "samples"

SAMPLES = {
    "corridor": GenConfig(3, 31, seed=11, motion="constant-velocity", noise=1),
    "pair_walk": GenConfig(2, 31, seed=12, motion="random-walk", noise=1),
    "plaza": GenConfig(10, 50, seed=13, width=1008, height=672, noise=2, churn=0.05),
    "estimated": GenConfig(8, 50, seed=14, width=800, height=608, motion="random-walk", noise=3, dropout=0.15),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, cfg in SAMPLES.items():
        save_sequence(generate(cfg), OUT / f"{name}.json")
    save_sequence(mode_switch_example(), OUT / "mode_switch.json")


if __name__ == "__main__":
    main()
