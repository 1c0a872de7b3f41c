#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Independent reimplementation of the geolocation and aggregation pipeline.

Reads a commit TSV and a refs directory, writes geolocation.tsv plus the
three run tables into an output directory. Used to derive the golden
tables for the demo corpus; it shares no code with the Rust crates.

    python3 scripts/oracle_pipeline.py data/demo/commits.tsv data/refs OUT
"""

import sys
import unicodedata
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path
from zoneinfo import ZoneInfo

TIE_EPSILON = 1e-9
THRESHOLD = 5
BAND = (0, 180)


def read_tsv(path):
    rows = []
    with open(path, encoding="utf-8") as f:
        lines = [l.rstrip("\n") for l in f if l.strip() and not l.startswith("#")]
    for line in lines[1:]:
        rows.append(line.split("\t"))
    return rows


def unescape(s):
    out, i = [], 0
    while i < len(s):
        if s[i] == "\\":
            nxt = s[i + 1]
            out.append({"t": "\t", "n": "\n", "\\": "\\"}[nxt])
            i += 2
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def is_letter(c):
    return unicodedata.category(c)[0] in "LM"


def classify(name):
    t = name.strip()
    if t and not any(c.isspace() for c in t) and "@" in t:
        local, _, domain = t.rpartition("@")
        if local and domain and "." in domain:
            return None
    visible = [c for c in name if not c.isspace()]
    if not visible:
        return None
    if sum(not is_letter(c) for c in visible) * 100 > len(visible) * 10:
        return None
    if len(name) > 100:
        return None
    return name


def tokenize(name):
    tokens = []
    for chunk in name.split():
        pieces, cur = [], ""
        for c in chunk:
            if cur and cur[-1].islower() and c.isupper():
                pieces.append(cur)
                cur = ""
            cur += c
        pieces.append(cur)
        for p in pieces:
            if len(p) >= 2 and any(is_letter(c) for c in p):
                tokens.append(p.lower())
    return tokens


def main():
    commits_path, refs, out = Path(sys.argv[1]), Path(sys.argv[2]), Path(sys.argv[3])
    regions = [r[0] for r in read_tsv(refs / "regions.tsv")]
    region_pos = {r: i for i, r in enumerate(regions)}
    places = sorted(read_tsv(refs / "places.tsv"), key=lambda r: r[0])
    place_info = {
        p[0]: (p[2], int(p[3]), [ZoneInfo(z) for z in p[4].split(",")]) for p in places
    }
    cctld = {r[0].lower(): r[1] for r in read_tsv(refs / "cctld.tsv")}
    names = {}
    for kind in ("forenames", "surnames"):
        table = defaultdict(list)
        for tok, place, freq in read_tsv(refs / f"{kind}.tsv"):
            table[tok].append((place, float(freq)))
        names[kind] = table

    def offsets(place, ts):
        dt = datetime.fromtimestamp(ts, timezone.utc)
        return {int(dt.astimezone(z).utcoffset().total_seconds() / 60) for z in place_info[place][2]}

    def offset_name(name, ts, off):
        cands = [p[0] for p in places if off in offsets(p[0], ts)]
        score = {p: 0.0 for p in cands}
        for tok in tokenize(name):
            for kind in ("forenames", "surnames"):
                for place, freq in names[kind].get(tok, []):
                    if place in score:
                        score[place] += place_info[place][1] * freq
        by_region = defaultdict(float)
        for p in cands:
            by_region[place_info[p][0]] += score[p]
        best = max(by_region.values(), default=0.0)
        if best <= 0:
            return None
        top = sorted((r for r, s in by_region.items() if best - s <= TIE_EPSILON * best), key=region_pos.get)
        return top[0]

    def email_region(email):
        if "@" not in email:
            return None
        domain = email.rpartition("@")[2].strip()
        if "." not in domain:
            return None
        return cctld.get(domain.rpartition(".")[2].lower())

    commits = []
    seen = set()
    for sha, name, email, ts, off in read_tsv(commits_path):
        if sha in seen:
            continue
        seen.add(sha)
        commits.append((sha, unescape(name), unescape(email), int(ts), int(off)))

    results = []
    for sha, name, email, ts, off in commits:
        year = datetime.fromtimestamp(ts, timezone.utc).year
        region, method = None, "unresolved"
        plausible = classify(name)
        if off != 0 and plausible is not None:
            region = offset_name(plausible, ts, off)
            if region:
                method = "offset-name"
        if region is None:
            region = email_region(email)
            if region:
                method = "email-cctld"
        results.append((sha, year, region or "unresolved", method))

    out.mkdir(parents=True, exist_ok=True)
    with open(out / "geolocation.tsv", "w") as f:
        f.write("sha1\tyear\tregion_id\tmethod\n")
        for r in results:
            f.write("%s\t%d\t%s\t%s\n" % r)

    order = {r: i for i, r in enumerate(regions + ["unresolved"])}

    def write_table(path, header, counts):
        totals = defaultdict(int)
        for (y, _), n in counts.items():
            totals[y] += n
        with open(path, "w") as f:
            f.write(header + "\n")
            for (y, r) in sorted(counts, key=lambda k: (k[0], order[k[1]])):
                n = counts[(y, r)]
                f.write(f"{y}\t{r}\t{n}\t{n / totals[y]:.6f}\n")

    commit_counts = defaultdict(int)
    for _, year, region, _ in results:
        commit_counts[(year, region)] += 1
    write_table(out / "commits_by_year_region.tsv", "year\tregion_id\tcommit_count\tcommit_ratio", commit_counts)

    per_author = defaultdict(list)
    for (sha, name, email, ts, off), (_, year, region, _) in zip(commits, results):
        per_author[(name, email, year)].append(region)
    author_counts = defaultdict(int)
    for (_, _, year), regs in per_author.items():
        if len(regs) < THRESHOLD:
            continue
        resolved = [r for r in regs if r != "unresolved"]
        if resolved:
            best = max(resolved.count(r) for r in set(resolved))
            slot = min((r for r in set(resolved) if resolved.count(r) == best), key=region_pos.get)
        else:
            slot = "unresolved"
        author_counts[(year, slot)] += 1
    write_table(out / "authors_by_year_region.tsv", "year\tregion_id\tauthor_count\tauthor_ratio", author_counts)

    matrix = defaultdict(int)
    for sha, name, email, ts, off in commits:
        if not BAND[0] <= off <= BAND[1]:
            continue
        e = email_region(email)
        if e is None:
            continue
        plausible = classify(name)
        o = offset_name(plausible, ts, off) if plausible is not None else None
        matrix[(e, o or "unresolved")] += 1
    total = sum(matrix.values())
    with open(out / "disagreement.tsv", "w") as f:
        f.write("email_region\toffset_name_region\tcommit_count\tshare\n")
        for e, o in sorted(matrix, key=lambda k: (order[k[0]], order[k[1]])):
            n = matrix[(e, o)]
            f.write(f"{e}\t{o}\t{n}\t{n / total:.6f}\n")


if __name__ == "__main__":
    main()
