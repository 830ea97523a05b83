"""Build and cache the bundled reference fronts (long 500x500 runs)."""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from mocd import data                      # noqa: E402
from mocd.graph import load_gml            # noqa: E402
from mocd.metrics import build_reference_front  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "mocd" / "data" / "reference_fronts"


def main():
    OUT.mkdir(exist_ok=True)
    for dataset in data.BUNDLED:
        graph, _ = load_gml(data.path(dataset).read_text())
        for variant in ("KRM", "CCM"):
            target = OUT / f"{dataset}_{variant.lower()}_s0.txt"
            if target.exists():
                print(f"{target.name}: cached", flush=True)
                continue
            start = time.perf_counter()
            ref = build_reference_front(graph, variant, seed=0, dataset=dataset,
                                        cache_path=target)
            print(f"{target.name}: {len(ref.points)} points "
                  f"in {time.perf_counter() - start:.0f}s", flush=True)


if __name__ == "__main__":
    main()
