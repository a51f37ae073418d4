"""Smoke test for the pyhollowkit extension module.

Build first:
    cargo build -p hollowkit-py --release --features extension-module
then run:
    python3 python/smoke_test.py
Set PYHOLLOWKIT_LIB to point at a specific shared library.
"""

import os
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library():
    env = os.environ.get("PYHOLLOWKIT_LIB")
    if env:
        return Path(env)
    for profile in ("release", "debug"):
        for name in ("libpyhollowkit.so", "libpyhollowkit.dylib", "pyhollowkit.dll"):
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("pyhollowkit library not found; build it with the extension-module feature")


def load():
    lib = locate_library()
    tmp = tempfile.mkdtemp(prefix="pyhollowkit-")
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy(lib, Path(tmp) / f"pyhollowkit{suffix}")
    sys.path.insert(0, tmp)
    import pyhollowkit

    return pyhollowkit


def main():
    hk = load()

    ball = hk.Body.ball([0.0, 0.0], 1.0)
    assert ball.dim == 2 and ball.kind == "ball"
    assert ball.contains([0.5, 0.5])
    assert abs(ball.distance([3.0, 4.0]) - 4.0) < 1e-9
    square = hk.Body.box([2.0, -1.0], [3.0, 1.0])
    dist, _, _ = hk.min_distance(ball, square)
    assert abs(dist - 1.0) < 1e-6, dist
    assert hk.intersect_witness([ball, square]) is None

    part1, part2, x = hk.radon_partition([[0, 0], [2, 0], [0, 2], [1, 1.5]])
    assert sorted(part1 + part2) == [0, 1, 2, 3]

    verdict = hk.check_critical(hk.three_disks(1.9))
    assert verdict["status"] == "critical", verdict
    family = verdict["family"]
    simplex = family.hollow_simplex()
    assert len(simplex["vertices"]) == 3
    cert = family.certify_hollow(0.005)
    assert cert["component_count"] == 1
    assert cert["hausdorff"] <= cert["threshold"], cert
    assert max(family.uniqueness_probe(4, 1)) < 1e-6

    overlap = hk.check_critical(hk.three_disks(1.5))
    assert overlap["status"] == "common_point", overlap

    boxes = [hk.Body.box([0, 0], [2, 2]), hk.Body.box([1, 0], [3, 2]), hk.Body.box([0, 1], [2, 3])]
    witnesses = [hk.intersect_witness([b for j, b in enumerate(boxes) if j != i]) for i in range(3)]
    sol = hk.klee_solve(boxes, witnesses)
    assert all(b.contains(sol["point"], 1e-5) for b in boxes), sol

    gap = hk.kkm_verify([[0.0], [1.0]], [hk.Body.box([0.0], [0.4]), hk.Body.box([0.6], [1.0])])
    assert not gap["holds"] and gap["counterexample"] is not None

    try:
        hk.Body.ball([0.0], -1.0)
    except hk.HollowkitError as e:
        assert isinstance(e, ValueError)
    else:
        raise AssertionError("negative radius accepted")

    print(f"pyhollowkit smoke test passed (hollow measure {cert['measure']:.4f})")


if __name__ == "__main__":
    main()
