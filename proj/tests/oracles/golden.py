#!/usr/bin/env python3
"""Independent reference computations for the frozen files in tests/golden.

Everything here is written from the format and formula descriptions, not from
the C++ sources. Run from the repository root:

    python3 tests/oracles/golden.py

and commit the regenerated files only after checking the diff by hand.
"""

import csv
import hashlib
import io
import json
import math
import random
import struct
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
OUT = ROOT / "tests" / "golden"


def sha(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


# ---- canonical encoding ----------------------------------------------------

def u64(v): return struct.pack(">Q", v & 0xFFFFFFFFFFFFFFFF)
def u32(v): return struct.pack(">I", v)
def text(s): b = s.encode(); return u32(len(b)) + b
def opt(v, f): return b"\x00" if v is None else b"\x01" + f(v)


KINDS = ["PageVisit", "Search", "Bookmark", "QuizAnswer", "ShellEvent"]


def activity_body(r):
    return (r["actor"] + bytes([KINDS.index(r["kind"])])
            + opt(r.get("url"), text) + opt(r.get("title"), text)
            + opt(r.get("dwell_seconds"), u64)
            + opt(r.get("query_terms"), lambda ts: u32(len(ts)) + b"".join(text(t) for t in ts))
            + opt(r.get("question_id"), text) + opt(r.get("answer_value"), u64)
            + r["shell_id"] + u64(r["captured_at"]))


def activity(r):
    body = activity_body(r)
    rid = sha(body)
    return rid, rid + body


def ledger_activity(r):
    return b"\x01" + activity(r)[1]


def leaf(enc): return sha(b"\x00" + enc)
def node(l, r): return sha(b"\x01" + l + r)


def fold(level):
    if not level:
        return bytes(32)
    while len(level) > 1:
        nxt = [node(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def sample_records():
    actor = sha(b"golden-actor-key")
    shell = sha(b"golden-shell")
    r1 = {"actor": actor, "kind": "PageVisit", "url": "https://example.org/rust",
          "title": "Rust news", "dwell_seconds": 42, "shell_id": shell, "captured_at": 1700000000}
    r2 = {"actor": actor, "kind": "Search", "query_terms": ["rust", "borrow checker"],
          "shell_id": shell, "captured_at": 1700000060}
    r3 = {"actor": actor, "kind": "QuizAnswer", "question_id": "ei1", "answer_value": -2,
          "shell_id": bytes(32), "captured_at": 1700000120}
    return [r1, r2, r3]


def record_json(r):
    out = {k: (v.hex() if isinstance(v, bytes) else v) for k, v in r.items()}
    return out


def encoding_golden():
    recs = sample_records()
    encs = [ledger_activity(r) for r in recs]
    l = [leaf(e) for e in encs]
    return {
        "records": [record_json(r) for r in recs],
        "record_ids": [activity(r)[0].hex() for r in recs],
        "activity_encodings": [activity(r)[1].hex() for r in recs],
        "ledger_encodings": [e.hex() for e in encs],
        "merkle_one": l[0].hex(),
        # written out straight-line rather than through fold()
        "merkle_three": node(node(l[0], l[1]), l[2]).hex(),
    }


# ---- content store --------------------------------------------------------

CHUNK = 256 * 1024


def pattern(n):
    return bytes((i * 31 + 7) % 251 for i in range(n))


def content_root(data):
    chunks = [data[i:i + CHUNK] for i in range(0, len(data), CHUNK)] or [b""]
    hashes = [sha(b"\x02" + c) for c in chunks]
    if len(hashes) == 1:
        return hashes[0]
    return fold([leaf(h) for h in hashes])


def content_golden():
    cases = {}
    for name, n in [("empty", 0), ("one_byte", 1), ("chunk_minus_one", CHUNK - 1), ("chunk", CHUNK),
                    ("chunk_plus_one", CHUNK + 1), ("kib300", 300 * 1024), ("three_chunks", 3 * CHUNK + 5)]:
        cases[name] = {"length": n, "root": content_root(pattern(n)).hex()}
    # the two-chunk case again, spelled out
    d = pattern(300 * 1024)
    two = node(leaf(sha(b"\x02" + d[:CHUNK])), leaf(sha(b"\x02" + d[CHUNK:])))
    assert two.hex() == cases["kib300"]["root"]
    assert cases["empty"]["root"] == sha(b"\x02").hex()
    return {"pattern": "byte i = (31*i + 7) mod 251", "cases": cases}


# ---- text model -----------------------------------------------------------

STOPWORDS = set((ROOT / "data" / "stopwords.txt").read_text().split())


def tokenize(s: str):
    out, cur = [], bytearray()
    for b in s.encode():
        if 0x41 <= b <= 0x5A:
            cur.append(b + 32)
        elif 0x61 <= b <= 0x7A or 0x30 <= b <= 0x39 or b >= 0x80:
            cur.append(b)
        else:
            if len(cur) >= 2:
                out.append(bytes(cur).decode())
            cur = bytearray()
    if len(cur) >= 2:
        out.append(bytes(cur).decode())
    return out


def content_tokens(s):
    return [t for t in tokenize(s) if t not in STOPWORDS]


def micros(x: float) -> int:
    return int(Decimal(x * 1e6).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def topics(docs, k):
    toks = [content_tokens(d) for d in docs]
    n = len(docs)
    terms = sorted({t for ts in toks for t in ts})
    scored = []
    for t in terms:
        tf = sum(ts.count(t) for ts in toks)
        df = sum(1 for ts in toks if t in ts)
        idf = math.log((1.0 + n) / (1.0 + df)) + 1.0
        scored.append((t, micros(tf * idf)))
    scored.sort(key=lambda p: (-p[1], p[0].encode()))
    return scored[:k]


WORDS = ("rust async tokio cargo borrow lifetime garden tomato basil soil compost "
         "the and of to in is it for with a I x 42 v2 Rust GARDEN café naïve "
         "Ada Lovelace plato data model chain block ledger hash token").split()
SEPS = [" ", " ", " ", ", ", ". ", "-", "/", "  ", "!", "'"]


def random_corpus(rng):
    docs = []
    for _ in range(rng.randint(0, 20)):
        n = rng.randint(0, 50)
        parts = []
        for _ in range(n):
            parts.append(rng.choice(WORDS))
            parts.append(rng.choice(SEPS))
        docs.append("".join(parts))
    return docs


def tfidf_golden():
    rng = random.Random(20240611)
    corpora = []
    for _ in range(100):
        docs = random_corpus(rng)
        k = rng.randint(1, 25)
        corpora.append({"docs": docs, "k": k,
                        "expected": [{"term": t, "micros": m} for t, m in topics(docs, k)]})
    apple = topics(["apple apple banana"], 1)
    return {"apple": {"term": apple[0][0], "micros": apple[0][1]}, "corpora": corpora}


# ---- learning formulas ----------------------------------------------------

def refine_weight(hits, max_hits, age_seconds, alpha=0.5, half_life_days=30.0):
    usage = hits / max_hits if max_hits else 0.0
    return alpha * usage + (1 - alpha) * 2 ** (-(age_seconds / 86400.0) / half_life_days)


def refine_golden():
    rows = []
    for hits, mx, age in [(0, 0, 30 * 86400), (5, 5, 0), (0, 3, 0), (1, 4, 15 * 86400),
                          (2, 2, 400 * 86400), (0, 9, 200 * 86400), (3, 7, 86399)]:
        rows.append({"hits": hits, "max_hits": mx, "age_seconds": age,
                     "weight_micros": micros(refine_weight(hits, mx, age))})
    return {"one_half_life_micros": micros(refine_weight(0, 0, 30 * 86400)), "table": rows}


def quiz_golden():
    qs = [("ei1", "EI", 1), ("ei2", "EI", -1), ("sn1", "SN", 1), ("sn2", "SN", -1),
          ("tf1", "TF", 1), ("tf2", "TF", -1), ("jp1", "JP", 1), ("jp2", "JP", -1)]
    answers = {"ei1": 2, "ei2": 1, "sn1": -1, "sn2": 2, "tf1": 0, "tf2": 0, "jp1": -2, "jp2": 1}
    axes = ["EI", "SN", "TF", "JP"]
    scores = [sum(answers[q] * p for q, a, p in qs if a == ax) for ax in axes]
    code = "".join(ax[0] if s >= 0 else ax[1] for ax, s in zip(axes, scores))
    return {"answers": answers, "scores": scores, "code": code}


def largest_remainder(mass):
    total = sum(mass.values())
    shares = {t: Fraction(m * 1_000_000, total) for t, m in mass.items()}
    base = {t: int(s) for t, s in shares.items()}
    left = 1_000_000 - sum(base.values())
    order = sorted(mass, key=lambda t: (-(shares[t] - base[t]), t.encode()))
    for t in order[:left]:
        base[t] += 1
    return {t: v for t, v in sorted(base.items(), key=lambda p: p[0].encode()) if v > 0}


def train_golden():
    a = {"alpha": 2_000_000, "beta": 1_000_000}
    b = {"gamma": 1_500_000, "delta": 500_000}
    mass = {}
    for vocab, w in [(a, 1_000_000), (b, 3_000_000)]:
        for t, s in vocab.items():
            mass[t] = mass.get(t, 0) + w * s
    return {"objects": [{"weight_micros": 1_000_000, "vocabulary": a},
                        {"weight_micros": 3_000_000, "vocabulary": b}],
            "weights": largest_remainder(mass)}


def salience(model, s):
    toks = content_tokens(s)
    return sum(model.get(t, 0.0) for t in toks) / len(toks) if toks else 0.0


# ---- end-to-end fixture ---------------------------------------------------

def history_golden():
    rows = list(csv.DictReader(io.StringIO((ROOT / "tests" / "fixtures" / "history.csv").read_text())))
    docs = [r["title"] for r in rows]
    vocab = topics(docs, 20)
    weights = largest_remainder({t: 1_000_000 * m for t, m in vocab})
    return {"rows": len(rows), "k": 20,
            "vocabulary": [{"term": t, "micros": m} for t, m in vocab],
            "model_weights": weights,
            "on_topic": "async rust ownership and borrow checking",
            "off_topic": "lentil soup with onions and garlic",
            "on_topic_salience": salience({t: w / 1e6 for t, w in weights.items()},
                                          "async rust ownership and borrow checking"),
            "off_topic_salience": salience({t: w / 1e6 for t, w in weights.items()},
                                           "lentil soup with onions and garlic")}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    learning = {
        "stopwords_sha256": sha((ROOT / "data" / "stopwords.txt").read_bytes()).hex(),
        "refine": refine_golden(),
        "quiz": quiz_golden(),
        "train": train_golden(),
        "salience_rust_rust_go": salience({"rust": 1.0}, "rust rust go"),
    }
    files = {
        "encoding.json": encoding_golden(),
        "content.json": content_golden(),
        "tfidf.json": tfidf_golden(),
        "learning.json": learning,
        "history.json": history_golden(),
    }
    for name, doc in files.items():
        (OUT / name).write_text(json.dumps(doc, indent=1, ensure_ascii=False, sort_keys=True) + "\n")
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
