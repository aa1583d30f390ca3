"""Size and build time of the universal Witt polynomial tables."""

import time

from brauerheight.witt import WittError, build_witt_table, table_available


def terms(polys):
    return sum(len(f) for f in polys)


def main():
    print(f"{'p':>3} {'n':>3} {'sum terms':>10} {'prod terms':>11} {'seconds':>8}")
    for p in (2, 3, 5, 7):
        for n in range(1, 6):
            if not table_available(p, n):
                print(f"{p:>3} {n:>3} {'-':>10} {'-':>11} {'skipped':>8}")
                continue
            t0 = time.perf_counter()
            try:
                T = build_witt_table(p, n)
            except WittError as exc:
                print(f"{p:>3} {n:>3} error: {exc}")
                continue
            dt = time.perf_counter() - t0
            print(f"{p:>3} {n:>3} {terms(T.sum_polys):>10} {terms(T.prod_polys):>11} {dt:>8.2f}")


if __name__ == "__main__":
    main()
