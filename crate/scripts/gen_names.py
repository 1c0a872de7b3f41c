#!/usr/bin/env python3
"""Generate the bundled synthetic name-frequency fixture.

The frequencies are invented. They only need to be plausible enough to
exercise the offset/name scorer end to end; real deployments substitute
their own forename/surname tables with the same schema.
"""
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "refs"

US = ["us-east", "us-central", "us-mountain", "us-arizona", "us-pacific", "us-alaska", "us-hawaii"]
CA = ["ca-newfoundland", "ca-atlantic", "ca-east", "ca-central", "ca-mountain", "ca-pacific"]
RU = ["ru-kaliningrad", "ru-moscow", "ru-samara", "ru-yekaterinburg", "ru-omsk", "ru-novosibirsk",
      "ru-krasnoyarsk", "ru-irkutsk", "ru-yakutsk", "ru-vladivostok", "ru-magadan", "ru-kamchatka"]
BR = ["br-east", "br-amazon", "br-acre"]
MX = ["mx-central", "mx-pacific", "mx-northwest", "mx-southeast"]
AU = ["au-east", "au-queensland", "au-south", "au-north", "au-west"]
IDN = ["id-west", "id-central", "id-east"]
ANGLO = US + CA + ["gb", "ie"] + AU + ["nz"]

# (token, {place_or_group: frequency})
FORENAMES = [
    ("eric", {"gh": 0.02, "fr": 0.005, "gb": 0.003, **{p: 0.004 for p in US}, "se": 0.006, "no": 0.005}),
    ("john", {**{p: 0.016 for p in ANGLO}, "ng": 0.008, "ke": 0.012, "gh": 0.009}),
    ("michael", {**{p: 0.014 for p in ANGLO}, "de": 0.009, "ke": 0.006}),
    ("david", {**{p: 0.012 for p in ANGLO}, "il": 0.015, "fr": 0.006, "es": 0.007, "br-east": 0.004}),
    ("james", {**{p: 0.013 for p in ANGLO}, "ng": 0.004}),
    ("mary", {**{p: 0.009 for p in ANGLO}, "ie": 0.012, "ph": 0.006}),
    ("keith", {**{p: 0.002 for p in US}, "gb": 0.003}),
    ("jean", {"fr": 0.012, "be": 0.006, "ch": 0.003, "ca-east": 0.004, "ht": 0.014, "cm": 0.006, "ci": 0.006}),
    ("pierre", {"fr": 0.009, "be": 0.004, "ch": 0.003, "ca-east": 0.002, "cm": 0.003}),
    ("marie", {"fr": 0.011, "be": 0.005, "ht": 0.008, "de": 0.003}),
    ("thomas", {"fr": 0.008, "de": 0.011, "at": 0.008, **{p: 0.005 for p in US}, "gb": 0.006}),
    ("hans", {"de": 0.007, "at": 0.006, "ch": 0.005, "nl": 0.004}),
    ("stefan", {"de": 0.008, "at": 0.008, "ch": 0.005, "se": 0.004, "ro": 0.005, "rs": 0.006}),
    ("jan", {"nl": 0.012, "de": 0.006, "pl": 0.011, "cz": 0.012, "sk": 0.008, "se": 0.004}),
    ("pieter", {"nl": 0.004, "be": 0.003, "za": 0.003}),
    ("lars", {"se": 0.010, "no": 0.011, "dk": 0.010}),
    ("mikko", {"fi": 0.012}),
    ("giuseppe", {"it": 0.016}),
    ("marco", {"it": 0.012, "ch": 0.002, "br-east": 0.001}),
    ("jose", {"es": 0.014, **{p: 0.015 for p in MX}, "co": 0.013, "ar": 0.010, "pe": 0.012, "ph": 0.006, **{p: 0.008 for p in BR}, "pt": 0.011}),
    ("maria", {"es": 0.016, "it": 0.010, "pt": 0.015, **{p: 0.013 for p in BR}, **{p: 0.012 for p in MX}, "co": 0.011, "ar": 0.010, "ph": 0.009}),
    ("juan", {"es": 0.012, **{p: 0.014 for p in MX}, "co": 0.012, "ar": 0.011, "pe": 0.010, "cl": 0.010}),
    ("joao", {"pt": 0.014, **{p: 0.013 for p in BR}}),
    ("piotr", {"pl": 0.013}),
    ("vladimir", {**{p: 0.010 for p in RU}, "ua": 0.004, "by": 0.006, "rs": 0.003}),
    ("sergey", {**{p: 0.014 for p in RU}, "ua": 0.005, "by": 0.006, "kz": 0.004}),
    ("olena", {"ua": 0.009}),
    ("mehmet", {"tr": 0.018}),
    ("ali", {"tr": 0.009, "ir": 0.015, "eg": 0.008, "pk": 0.011, "iq": 0.014, "sa": 0.009}),
    ("mohamed", {"eg": 0.025, "ma": 0.020, "dz": 0.020, "tn": 0.018, "sd": 0.015, "so": 0.020, "ng": 0.004}),
    ("reza", {"ir": 0.012}),
    ("chinedu", {"ng": 0.003}),
    ("kwame", {"gh": 0.010}),
    ("kofi", {"gh": 0.008}),
    ("wanjiru", {"ke": 0.005}),
    ("thabo", {"za": 0.004, "ls": 0.010}),
    ("rahul", {"in": 0.006}),
    ("amit", {"in": 0.005, "np": 0.002}),
    ("priya", {"in": 0.004, "lk": 0.002}),
    ("rajesh", {"in": 0.005}),
    ("wei", {"cn": 0.010, "tw": 0.006, "sg": 0.005, "my": 0.002}),
    ("jing", {"cn": 0.007, "tw": 0.003}),
    ("hiroshi", {"jp": 0.006}),
    ("takashi", {"jp": 0.005}),
    ("yuki", {"jp": 0.004}),
    ("minjun", {"kr": 0.006}),
    ("jiho", {"kr": 0.004}),
    ("nguyen", {"vn": 0.002}),
    ("budi", {**{p: 0.006 for p in IDN}}),
    ("somchai", {"th": 0.006}),
    ("jack", {**{p: 0.008 for p in AU}, "nz": 0.008, "gb": 0.006, **{p: 0.003 for p in US}}),
    ("aroha", {"nz": 0.002}),
]

SURNAMES = [
    ("smith", {**{p: 0.010 for p in ANGLO}}),
    ("johnson", {**{p: 0.008 for p in US}, "gb": 0.003}),
    ("williams", {**{p: 0.007 for p in US}, "gb": 0.005, **{p: 0.005 for p in AU}}),
    ("bostic", {**{p: 0.00004 for p in US}}),
    ("murphy", {"ie": 0.012, **{p: 0.002 for p in US}}),
    ("dupont", {"fr": 0.0015, "be": 0.002}),
    ("martin", {"fr": 0.004, "es": 0.002, **{p: 0.002 for p in US}, "gb": 0.001}),
    ("bernard", {"fr": 0.0025, "ch": 0.001}),
    ("mueller", {"de": 0.003, "ch": 0.004, "at": 0.002}),
    ("schmidt", {"de": 0.0025, "at": 0.001}),
    ("dejong", {"nl": 0.0050}),
    ("jansen", {"nl": 0.0045, "be": 0.001}),
    ("andersson", {"se": 0.010}),
    ("hansen", {"no": 0.010, "dk": 0.009}),
    ("korhonen", {"fi": 0.004}),
    ("rossi", {"it": 0.0040, "ch": 0.001}),
    ("garcia", {"es": 0.032, **{p: 0.020 for p in MX}, "co": 0.010, "ar": 0.008, **{p: 0.003 for p in US}}),
    ("rodriguez", {"es": 0.015, **{p: 0.015 for p in MX}, "co": 0.020, "ar": 0.012, "cu": 0.018, **{p: 0.003 for p in US}}),
    ("silva", {"pt": 0.010, **{p: 0.050 for p in BR}}),
    ("santos", {"pt": 0.009, **{p: 0.040 for p in BR}, "ph": 0.006}),
    ("nowak", {"pl": 0.005}),
    ("novak", {"cz": 0.003, "si": 0.007, "sk": 0.004, "hr": 0.004}),
    ("ivanov", {**{p: 0.006 for p in RU}, "bg": 0.010}),
    ("smirnov", {**{p: 0.005 for p in RU}}),
    ("shevchenko", {"ua": 0.004}),
    ("yilmaz", {"tr": 0.040}),
    ("hosseini", {"ir": 0.010}),
    ("hassan", {"eg": 0.010, "so": 0.012, "sd": 0.010, "ng": 0.002}),
    ("mensah", {"gh": 0.015}),
    ("owusu", {"gh": 0.012}),
    ("okafor", {"ng": 0.002}),
    ("kamau", {"ke": 0.012}),
    ("nkosi", {"za": 0.004, "sz": 0.008}),
    ("kumar", {"in": 0.030, "np": 0.005, "fj": 0.004}),
    ("sharma", {"in": 0.010, "np": 0.008}),
    ("khan", {"pk": 0.040, "in": 0.008, "bd": 0.010, "af": 0.012}),
    ("wang", {"cn": 0.070, "tw": 0.040, "sg": 0.006}),
    ("li", {"cn": 0.075, "kr": 0.001}),
    ("zhang", {"cn": 0.065, "tw": 0.020}),
    ("chen", {"cn": 0.050, "tw": 0.080, "hk": 0.040, "sg": 0.040, "my": 0.010}),
    ("sato", {"jp": 0.015}),
    ("suzuki", {"jp": 0.014}),
    ("tanaka", {"jp": 0.011}),
    ("kim", {"kr": 0.210, "kp": 0.200}),
    ("park", {"kr": 0.085, "kp": 0.080}),
    ("nguyen", {"vn": 0.380, **{p: 0.0003 for p in US}, **{p: 0.003 for p in AU}}),
    ("tran", {"vn": 0.110}),
    ("santoso", {**{p: 0.004 for p in IDN}}),
    ("reyes", {"ph": 0.008, **{p: 0.005 for p in MX}}),
    ("wongsakul", {"th": 0.001}),
    ("taylor", {**{p: 0.005 for p in ANGLO}}),
    ("wilson", {**{p: 0.004 for p in ANGLO}, "nz": 0.006}),
]


def write(name, table):
    with open(OUT / name, "w", encoding="utf-8") as f:
        f.write("token\tplace_id\tfrequency\n")
        for token, freqs in table:
            for place in sorted(freqs):
                f.write(f"{token}\t{place}\t{freqs[place]:g}\n")


if __name__ == "__main__":
    write("forenames.tsv", FORENAMES)
    write("surnames.tsv", SURNAMES)
