"""Write the golden CM4 bitstreams in tests/golden/.

Only rerun this after a deliberate wire-format change; the tests compare
fresh encodes against these files byte for byte.
"""

from pathlib import Path

from skelcodec.codec import Scheme, encode_sequence
from skelcodec.document import dumps
from skelcodec.model import Frame, Sequence, Skeleton
from skelcodec.synth import mode_switch_example

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"

SINGLE = Skeleton(
    0,
    (
        (640, 180), (640, 215), (615, 220), (605, 260), None, (665, 220), (675, 260),
        (680, 295), (625, 300), (622, 360), (620, 420), (655, 300), (658, 360), (660, 420),
    ),
)

GOLDEN = {
    "empty": Sequence(1280, 720),
    "single": Sequence(1280, 720, (Frame(0, (SINGLE,)),)),
    "mode_switch": mode_switch_example(),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, seq in GOLDEN.items():
        (OUT / f"{name}.json").write_text(dumps(seq))
        (OUT / f"{name}.skc").write_bytes(encode_sequence(seq, Scheme.CM4))


if __name__ == "__main__":
    main()
