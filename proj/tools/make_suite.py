#!/usr/bin/env python3
# Copyright 2026 The stepfix Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the perturbation fixture suites under data/suite/.

Each gold form is a list of component texts. Variants apply 0-3 edits:
a predicate swap (fixed by a replace), a dropped component (fixed by an
insert) and one or two extra components (each fixed by a delete).
"""
import json
import re
import sys
from pathlib import Path

H1, H2 = "<sparql-header-1>", "<sparql-header-2>"

JFK = ("John F. Kennedy", "m.0d3k14")

GOLDS = [
    dict(id="cwq", header=H1, question="What language is spoken in the country that contains Al Sharqia Governorate?",
         comps=["?c ns:location.country.administrative_divisions #entity1# .",
                "?c ns:location.country.official_language ?x ."],
         entities=[("Al Sharqia Governorate", "m.02r9w1")],
         swap=("location.country.official_language", "location.country.languages_spoken"), drop=0, swap_at=1),
    dict(id="zeppos", header=H1, question="What is the mascot of the team that has Nicholas S. Zeppos as its leader?",
         comps=["?c ns:organization.organization.leadership ?k . ?k ns:organization.leadership.person #entity1# .",
                "?c ns:education.educational_institution.mascot ?x ."],
         entities=[("Nicholas S. Zeppos", "m.0bwfn8p")],
         swap=("education.educational_institution.mascot", "education.educational_institution.colors"), drop=0, swap_at=1),
    dict(id="sam_shepard", header=H2, question="What country with the capital of Hagåtña is where Sam Shepard lives?",
         comps=["#entity1# ns:people.person.places_lived ?y . ?y ns:people.place_lived.location ?x .",
                "?x ns:location.country.capital #entity2# ."],
         entities=[("Sam Shepard", "m.017r13"), ("Hagåtña", "m.0gq4j")],
         swap=("location.country.capital", "location.country.currency_used"), drop=0, swap_at=1),
    dict(id="caribbean", header=H2, question="Which Caribbean country has a calling code greater than 590?",
         comps=["#entity1# ns:location.location.contains ?x . ?x ns:common.topic.notable_types #entity2# .",
                "?x ns:location.country.calling_code ?num . filter ( xsd:integer ( ?num ) > 590 ) ."],
         entities=[("Caribbean", "m.0261m"), ("country", "m.01mp")],
         swap=("location.country.calling_code", "location.location.area"), drop=1, swap_at=1),
    dict(id="cleveland_browns", header=H2, question="Which Cleveland Browns draft pick started his career earliest?",
         comps=["#entity1# ns:sports.professional_sports_team.draft_picks ?y . ?y ns:sports.sports_league_draft_pick.player ?x .",
                "?x ns:sports.pro_athlete.career_start ?num ."],
         suffix=" } order by ?num limit 1",
         entities=[("Cleveland Browns", "m.0cnk2q")],
         swap=("sports.pro_athlete.career_start", "sports.sports_team.founded"), drop=0, swap_at=1),
    dict(id="kennedy", header=H2, question="Who is both a member of the Kennedy family and the Order of the British Empire?",
         comps=["filter ( ?x != #entity1# ) { # parents #entity2# ns:people.person.parents ?x . } union "
                "{ # children #entity3# ns:people.person.children ?x . } union "
                "{ # siblings #entity4# ns:people.person.sibling_s ?y . ?y ns:people.sibling_relationship.sibling ?x . } union "
                "{ # spouse #entity5# ns:people.person.spouse_s ?y . ?y ns:people.marriage.spouse ?x . "
                "?y ns:people.marriage.type_of_union #entity6# . filter ( not exists { ?y ns:people.marriage.to [] } ) }",
                "?x ns:royalty.chivalric_order_member.belongs_to_order ?c . ?c ns:royalty.chivalric_order_membership.order #entity7# ."],
         entities=[JFK, JFK, JFK, JFK, JFK, ("Marriage", "m.04ztj"), ("Order of the British Empire", "m.0fd3y")],
         swap=("royalty.chivalric_order_member.belongs_to_order ?c . ?c ns:royalty.chivalric_order_membership.order",
               "government.governmental_jurisdiction.governing_officials ?c . ?c ns:government.government_position_held.office_holder"),
         drop=1, swap_at=1),
    dict(id="egypt_currency", header=H1, question="What currency is used in the country whose capital is Cairo?",
         comps=["?c ns:location.country.capital #entity1# .",
                "?c ns:location.country.currency_used ?x ."],
         entities=[("Cairo", "m.01w2v")],
         swap=("location.country.currency_used", "location.country.official_language"), drop=0, swap_at=1),
    dict(id="nationality_religion", header=H2, question="Which Irish people are Catholic?",
         comps=["?x ns:people.person.nationality #entity1# .",
                "?x ns:people.person.religion #entity2# ."],
         entities=[("Ireland", "m.03rt9"), ("Catholicism", "m.0c8wxp")],
         swap=("people.person.religion", "people.person.place_of_birth"), drop=1, swap_at=1,
         extra=("?x ns:music.artist.genre #entity{n}# .", ("Folk music", "m.02w4v"))),
    dict(id="small_population", header=H2, question="Which places in Oceania have fewer than 100000 people?",
         comps=["#entity1# ns:location.location.contains ?x .",
                "?x ns:location.statistical_region.population ?num . filter ( xsd:integer ( ?num ) < 100000 ) ."],
         entities=[("Oceania", "m.05nrg")],
         swap=("location.statistical_region.population", "location.location.area"), drop=1, swap_at=1),
    dict(id="latest_film", header=H2, question="What is the most recent film directed by Ang Lee?",
         comps=["?x ns:film.film.directed_by #entity1# .",
                "?x ns:film.film.release_date_s ?num ."],
         suffix=" } order by desc ( ?num ) limit 1",
         entities=[("Ang Lee", "m.0c0k1")],
         swap=("film.film.release_date_s", "sports.sports_team.founded"), drop=0, swap_at=1),
    dict(id="birthplace_capital", header=H1, question="Which country has as its capital the birthplace of a famous Egyptian?",
         comps=["?c ns:people.person.nationality #entity1# .",
                "?c ns:people.person.place_of_birth ?y .",
                "?x ns:location.country.capital ?y ."],
         entities=[("Egypt", "m.02k54")],
         swap=("people.person.place_of_birth", "people.person.religion"), drop=2, swap_at=1),
    dict(id="arabic_countries", header=H2, question="Which African countries have Arabic as official language?",
         comps=["#entity1# ns:location.location.contains ?x . ?x ns:common.topic.notable_types #entity2# .",
                "?x ns:location.country.official_language #entity3# ."],
         entities=[("Africa", "m.0dg3n1"), ("country", "m.01mp"), ("Arabic", "m.0jzc")],
         swap=("location.country.official_language", "location.country.languages_spoken"), drop=1, swap_at=1),
]

DEFAULT_EXTRA = ("?x ns:people.person.religion #entity{n}# .", ("Buddhism", "m.092bf5"))
SECOND_EXTRA = ("?x ns:people.person.nationality #entity{n}# .", ("Iceland", "m.03rj0"))


def renumber(text, entities):
    """Renumbers placeholders densely in order of appearance."""
    order = []
    for m in re.finditer(r"#entity(\d+)#", text):
        n = int(m.group(1))
        if n not in order:
            order.append(n)
    mapping = {old: i + 1 for i, old in enumerate(order)}
    text = re.sub(r"#entity(\d+)#", lambda m: "#entity%d#" % mapping[int(m.group(1))], text)
    return text, {str(mapping[old]): {"surface": entities[old][0], "kb_id": entities[old][1]} for old in order}


def build(gold, swap=False, drop=False, extra=0):
    comps = list(gold["comps"])
    ents = {i + 1: e for i, e in enumerate(gold["entities"])}
    if swap:
        i = gold["swap_at"]
        old, new = gold["swap"]
        assert old in comps[i], gold["id"]
        comps[i] = comps[i].replace(old, new)
    if drop:
        del comps[gold["drop"]]
    for pattern, entity in [gold.get("extra", DEFAULT_EXTRA), SECOND_EXTRA][:extra]:
        n = max(ents) + 1
        ents[n] = entity
        comps.append(pattern.format(n=n))
    text = gold["header"] + " " + " ".join(comps) + gold.get("suffix", "")
    return renumber(text, ents)


VARIANTS = [
    ("v0", {}),
    ("v1", dict(swap=True)),
    ("v2", dict(drop=True)),
    ("v3", dict(swap=True, extra=1)),
    ("v4", dict(swap=True, extra=2)),
]


def record(rid, gold, lf, entities):
    return {"id": rid, "lf": lf, "question": gold["question"], "entities": entities, "answers": []}


def write(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    golds, preds = [], []
    for g in GOLDS:
        glf, gents = build(g)
        for tag, kw in VARIANTS:
            rid = "%s.%s" % (g["id"], tag)
            plf, pents = build(g, **kw)
            golds.append(record(rid, g, glf, gents))
            preds.append(record(rid, g, plf, pents))
    write(out / "gold.jsonl", golds)
    write(out / "pred.jsonl", preds)

    # 50 pairs, 40 of them unperturbed.
    golds50, preds50 = [], []
    for k in range(50):
        g = GOLDS[k % len(GOLDS)]
        glf, gents = build(g)
        kw = VARIANTS[1 + k % 4][1] if k < 10 else {}
        rid = "s50.%02d.%s" % (k, g["id"])
        plf, pents = build(g, **kw)
        golds50.append(record(rid, g, glf, gents))
        preds50.append(record(rid, g, plf, pents))
    write(out / "gold50.jsonl", golds50)
    write(out / "pred50.jsonl", preds50)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/suite")
