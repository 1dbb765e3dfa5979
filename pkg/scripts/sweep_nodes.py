"""Support recovery as the graph grows (T=5000, P=2). Larger N values take minutes each."""

from _common import run

from svardag.simulate import SvarmSpec

if __name__ == "__main__":
    run("nodes", (20, 50, 100), SvarmSpec(t=5000, p=2), __doc__, show=("f1_w", "precision_w", "recall_w"))
