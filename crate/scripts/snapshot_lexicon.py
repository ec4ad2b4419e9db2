#!/usr/bin/env python3
"""Rebuild the agent-noun lexicon from ConceptNet IsA edges.

Writes one lower-cased lemma phrase per line. The output is a raw candidate
list; crates/core/data/agents.txt is a curated subset of it.

    python3 scripts/snapshot_lexicon.py --out agents_raw.txt
"""

import argparse
import json
import sys
import time
import urllib.parse
import urllib.request

API = "http://api.conceptnet.io/query"
ROOTS = ("agent", "person", "organization")
MAX_WORDS = 4


def fetch_edges(root, limit, pause):
    params = {"end": f"/c/en/{root}", "rel": "/r/IsA", "limit": str(limit)}
    url = f"{API}?{urllib.parse.urlencode(params)}"
    while url:
        with urllib.request.urlopen(url, timeout=30) as resp:
            page = json.load(resp)
        yield from page.get("edges", [])
        nxt = page.get("view", {}).get("nextPage")
        url = urllib.parse.urljoin(API, nxt) if nxt else None
        time.sleep(pause)


def phrase(node_id):
    # /c/en/member_state/n -> "member state"
    parts = node_id.split("/")
    if len(parts) < 4 or parts[2] != "en":
        return None
    text = parts[3].replace("_", " ").lower().strip()
    if not text or len(text.split()) > MAX_WORDS:
        return None
    return text


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", required=True)
    ap.add_argument("--limit", type=int, default=1000)
    ap.add_argument("--pause", type=float, default=1.0, help="seconds between requests")
    args = ap.parse_args()

    entries = set()
    for root in ROOTS:
        n = 0
        for edge in fetch_edges(root, args.limit, args.pause):
            p = phrase(edge.get("start", {}).get("@id", ""))
            if p:
                entries.add(p)
                n += 1
        print(f"{root}: {n} edges", file=sys.stderr)

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("# ConceptNet IsA snapshot: " + ", ".join(ROOTS) + "\n")
        for e in sorted(entries):
            f.write(e + "\n")
    print(f"wrote {len(entries)} entries to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
