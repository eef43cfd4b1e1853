"""Shared argument handling for the desk-scale scripts."""

import argparse
import logging
import os
from pathlib import Path

FALLBACK = "ws:n=1133,k=10,p=0.1,seed=0"


def default_dataset() -> str:
    path = os.environ.get("HETCASCADE_EMAIL") or str(Path(__file__).resolve().parent.parent / "data" / "arenas-email.txt")
    return path if Path(path).is_file() else FALLBACK


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--dataset", action="append", help="edge list or ws:... spec (repeatable)")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--rng-seed", type=int, default=0)
    return p


def setup(args, name: str):
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    datasets = tuple(args.dataset or [default_dataset()])
    out = Path(args.out_dir or f"results/{name}")
    return datasets, out
