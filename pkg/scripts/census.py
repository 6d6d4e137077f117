#!/usr/bin/env python3
"""Print the full-completeness census for a few closed types across the family chain."""
import argparse
import time

from arena.poly import family_chain, full_completeness_experiment, show_links

DEFAULT_TYPES = ["forall X. X -o X", "forall X. X -o (X -o X)", "forall X. (X * X) -o (X * X)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("types", nargs="*", default=DEFAULT_TYPES)
    ap.add_argument("--non-hf", action="store_true", help="also count all total strategies")
    args = ap.parse_args()
    for ty in args.types:
        for fam in family_chain():
            t0 = time.perf_counter()
            c = full_completeness_experiment(ty, fam)
            links = sorted(show_links(l) if l else "unclassified" for _, l in c.survivors)
            line = f"{ty:32} {fam.name:14} hf-winning={c.count} links={'; '.join(links)}"
            if args.non_hf:
                nh = full_completeness_experiment(ty, fam, history_free=False)
                line += f" total={nh.total_count} hunt={'yes' if nh.hunt else 'no'}"
            print(f"{line}  |Π|={len(c.game.plays)}  ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
