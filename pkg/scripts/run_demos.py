"""Run every registered demo and print a one-line status for each."""

import argparse
import sys
import time

from colombeau.demos import demo_names, run_demo


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="demos to run (default: all)")
    ap.add_argument("-v", "--verbose", action="store_true", help="list every check")
    args = ap.parse_args(argv)
    failed = 0
    for name in args.names or demo_names():
        t0 = time.perf_counter()
        rep = run_demo(name)
        failed += not rep.passed
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status}  {name:<24} {len(rep.checks):3d} checks  {time.perf_counter() - t0:6.2f} s")
        if args.verbose or not rep.passed:
            for c in rep.checks:
                print(f"      [{'ok' if c.passed else 'XX'}] {c.description}: {c.computed!s}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
