#!/usr/bin/env python3
"""Write demo corpora: the worked examples and a large synthetic corpus.

Usage:
    python3 scripts/make_demo_corpus.py --out data/demo.jsonl
    python3 scripts/make_demo_corpus.py --synthetic 1000 --out data/synth.jsonl
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from qedkit.corpus import CorpusDocument, serialize_corpus
from qedkit.synthetic import synthetic_corpus


def worked_examples():
    """The worked examples from the test fixtures, as a plain list."""
    import conftest

    class _Request:
        pass

    fixtures = [
        conftest.michigan_example,
        conftest.wimbledon_example,
        conftest.howls_example,
        conftest.world_series_example,
        conftest.got_talent_example,
        conftest.acme_example,
        conftest.title_link_example,
        conftest.answer_only_example,
        conftest.no_answer_example,
    ]
    return [f.__wrapped__() for f in fixtures]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True)
    parser.add_argument("--synthetic", type=int, default=0, help="emit N synthetic examples instead of the worked set")
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    if args.synthetic:
        n = args.synthetic
        counts = (round(n * 0.762), round(n * 0.16), 0)
        counts = (counts[0], counts[1], n - counts[0] - counts[1])
        doc = synthetic_corpus(counts=counts, seed=args.seed)
    else:
        doc = CorpusDocument(worked_examples(), "<demo>", [])
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(serialize_corpus(doc))
    print(f"wrote {len(doc.examples)} examples to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
