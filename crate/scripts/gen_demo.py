#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generate data/demo/commits.tsv: 1000 synthetic commits.

Deterministic: fixed seed, no wall clock. Offsets come from the local tz
database via zoneinfo, so regenerate only when the corpus itself must change.
"""

import hashlib
import random
import sys
from datetime import datetime, timezone
from pathlib import Path
from zoneinfo import ZoneInfo

SEED = 20240229
N_COMMITS = 1000

# (name, email, zone, first_year, last_year, weight)
AUTHORS = [
    ("Eric Allman", "eric@sendmail.org", "America/Los_Angeles", 1995, 2012, 40),
    ("Keith Bostic", "bostic@bsdi.com", "America/New_York", 1995, 2005, 25),
    ("John Smith", "jsmith@example.com", "America/Chicago", 2000, 2020, 30),
    ("Mary Johnson", "mary@johnson.us", "America/Denver", 2003, 2020, 15),
    ("Juan Garcia", "juan@garcia.mx", "America/Mexico_City", 2008, 2020, 20),
    ("João Silva", "joao@silva.com.br", "America/Sao_Paulo", 2005, 2020, 25),
    ("Hans Mueller", "hans@mueller.de", "Europe/Berlin", 1995, 2020, 40),
    ("Pierre Dupont", "pierre@dupont.fr", "Europe/Paris", 1998, 2020, 30),
    ("Marie Bernard", "marie.bernard@gmail.com", "Europe/Paris", 2010, 2020, 15),
    ("Pieter de Jong", "pieter@dejong.nl", "Europe/Amsterdam", 2000, 2020, 20),
    ("Giuseppe Rossi", "giuseppe@rossi.it", "Europe/Rome", 2002, 2020, 20),
    ("Mikko Korhonen", "mikko@korhonen.fi", "Europe/Helsinki", 1996, 2020, 30),
    ("Lars Andersson", "lars@andersson.se", "Europe/Stockholm", 1999, 2015, 15),
    ("Piotr Nowak", "piotr@nowak.pl", "Europe/Warsaw", 2006, 2020, 20),
    ("Olena Shevchenko", "olena@example.org", "Europe/Kyiv", 2012, 2020, 15),
    ("Sergey Ivanov", "sergey@ivanov.ru", "Europe/Moscow", 2001, 2020, 25),
    ("Mehmet Yilmaz", "mehmet@yilmaz.com.tr", "Europe/Istanbul", 2009, 2020, 15),
    ("Reza Hosseini", "reza@hosseini.ir", "Asia/Tehran", 2010, 2020, 10),
    ("Mohamed Hassan", "mohamed@hassan.eg", "Africa/Cairo", 2007, 2020, 15),
    ("Kwame Mensah", "kwame@mensah.com", "Africa/Accra", 2011, 2020, 20),
    ("Kofi Owusu", "kofi@owusu.com.gh", "Africa/Accra", 2014, 2020, 10),
    ("Chinedu Okafor", "chinedu@okafor.ng", "Africa/Lagos", 2012, 2020, 15),
    ("Wanjiru Kamau", "wanjiru@kamau.co.ke", "Africa/Nairobi", 2013, 2020, 10),
    ("Thabo Nkosi", "thabo@nkosi.co.za", "Africa/Johannesburg", 2010, 2020, 10),
    ("Priya Sharma", "priya@sharma.in", "Asia/Kolkata", 2006, 2020, 25),
    ("Rahul Kumar", "rahul@kumar.dev", "Asia/Kolkata", 2012, 2020, 15),
    ("Amit Khan", "amit@khan.pk", "Asia/Karachi", 2011, 2020, 10),
    ("Wei Zhang", "wei@zhang.cn", "Asia/Shanghai", 2004, 2020, 30),
    ("Jing Li", "jing@li.com", "Asia/Shanghai", 2010, 2020, 15),
    ("Hiroshi Tanaka", "hiroshi@tanaka.jp", "Asia/Tokyo", 1997, 2020, 30),
    ("Yuki Sato", "yuki@sato.co.jp", "Asia/Tokyo", 2009, 2020, 10),
    ("Minjun Kim", "minjun@kim.kr", "Asia/Seoul", 2008, 2020, 15),
    ("Nguyen Tran", "nguyen@tran.vn", "Asia/Ho_Chi_Minh", 2013, 2020, 10),
    ("Budi Santoso", "budi@santoso.id", "Asia/Jakarta", 2012, 2020, 10),
    ("Somchai Wongsakul", "somchai@wongsakul.th", "Asia/Bangkok", 2011, 2020, 10),
    ("Jack Wilson", "jack@wilson.com.au", "Australia/Sydney", 2001, 2020, 20),
    ("Aroha Williams", "aroha@williams.nz", "Pacific/Auckland", 2010, 2020, 10),
    ("James Murphy", "james@murphy.ie", "Europe/Dublin", 1998, 2020, 20),
    ("David Taylor", "david@taylor.co.uk", "Europe/London", 1995, 2020, 30),
    ("Jose Reyes", "jose@reyes.ph", "Asia/Manila", 2012, 2020, 10),
    # Names the filter rejects.
    ("root@buildhost.example.com", "root@buildhost.example.com", "UTC", 1996, 2010, 10),
    ("???", "anon@nowhere.fr", "Europe/Paris", 2000, 2008, 5),
    ("   ", "blank@example.de", "Europe/Berlin", 2004, 2012, 5),
    ("x_1_2_3", "x123@example.se", "Europe/Stockholm", 2003, 2009, 5),
    # Names with no frequency data.
    ("王伟", "wangwei@example.com", "Asia/Shanghai", 2015, 2020, 8),
    ("Zyx Qwv", "zyx@qwv.net", "Asia/Kolkata", 2005, 2015, 6),
]


def escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/demo/commits.tsv")
    rng = random.Random(SEED)
    weights = [a[5] for a in AUTHORS]
    rows = []
    i = 0
    # Commits arrive in per-author-year bursts so that a realistic share of
    # author-years clears the active-author threshold.
    while i < N_COMMITS:
        name, email, zone, lo, hi, _ = rng.choices(AUTHORS, weights)[0]
        year = rng.randint(lo, hi)
        start = int(datetime(year, 1, 1, tzinfo=timezone.utc).timestamp())
        end = int(datetime(year + 1, 1, 1, tzinfo=timezone.utc).timestamp())
        for _ in range(min(rng.randint(1, 12), N_COMMITS - i)):
            ts = rng.randrange(start, end)
            offset = datetime.fromtimestamp(ts, ZoneInfo(zone)).utcoffset()
            minutes = int(offset.total_seconds()) // 60
            sha = hashlib.sha1(f"demo-{SEED}-{i}".encode()).hexdigest()
            rows.append((ts, sha, name, email, minutes))
            i += 1
    rows.sort(key=lambda r: (-r[0], r[1]))
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as f:
        f.write("sha1\tauthor_name\tauthor_email\tauthor_timestamp\ttz_offset_minutes\n")
        for ts, sha, name, email, minutes in rows:
            f.write(f"{sha}\t{escape(name)}\t{escape(email)}\t{ts}\t{minutes}\n")


if __name__ == "__main__":
    main()
