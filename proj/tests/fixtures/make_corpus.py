#!/usr/bin/env python3
"""Builds the synthetic trajectory corpus under corpus/.

Each trajectory plants specific errors at known unit positions; the
expectations file records the planted ids plus the arithmetic terms used to
recompute the expected scores in the acceptance suite.
"""
import json
import os
import re

OUT = os.path.join(os.path.dirname(__file__), "corpus")

STOPWORDS = {"for", "the", "a", "an", "of", "in", "on", "to", "about",
             "more", "with", "and", "or", "at", "by", "from", "into", "further"}
IMPERATIVES = {"search", "find", "identify", "compare", "analyze", "check", "verify",
               "investigate", "look", "examine", "gather", "collect", "review", "explore",
               "determine", "confirm", "locate", "query", "browse", "fetch", "download",
               "extract", "compile", "summarize", "cross", "consult", "visit", "scan",
               "retrieve", "research", "run", "list", "filter", "read"}
SPECULATIVE = {"may", "might", "could", "possibly", "likely", "appears", "seems", "perhaps"}


def toks(s):
    return [t.lower() for t in re.findall(r"[A-Za-z0-9]+", s)]


def doc(url, *sentences):
    return {"url": url, "title": url.rsplit("/", 1)[-1], "content": " ".join(sentences)}


def loop(index, plan_sentences, summary_paragraphs, searches):
    return {
        "index": index,
        "plan_text": " ".join(plan_sentences),
        "summary_text": "\n\n".join(" ".join(p) for p in summary_paragraphs),
        "searches": searches,
    }


def trajectory(task_id, query, loops, paragraphs, citations, domain="energy"):
    return {
        "schema_version": "1",
        "task_id": task_id,
        "query": query,
        "domain": domain,
        "loops": loops,
        "final_report": {"paragraphs": paragraphs, "citations": citations},
    }


def sanity(traj):
    """Token-discipline checks that keep the planted labels recoverable."""
    all_sentences = []
    for lp in traj["loops"]:
        all_sentences += re.split(r"(?<=[.!?]) ", lp["plan_text"])
        for para in lp["summary_text"].split("\n\n"):
            all_sentences += re.split(r"(?<=[.!?]) ", para)
    for p in traj["final_report"]["paragraphs"]:
        all_sentences += re.split(r"(?<=[.!?]) ", p)
    for s in all_sentences:
        if not s.strip():
            continue
        assert not (set(toks(s)) & SPECULATIVE), f"speculative token in: {s}"
    sq_parts = [p.strip() for p in traj["query"].split(";")]
    sq_tokens = [set(toks(p)) for p in sq_parts]
    for i in range(len(sq_tokens)):
        for j in range(i + 1, len(sq_tokens)):
            assert not (sq_tokens[i] & sq_tokens[j]), "sub-query vocabularies overlap"


def write(traj, expectations, registry):
    sanity(traj)
    path = os.path.join(OUT, traj["task_id"] + ".json")
    with open(path, "w") as f:
        json.dump(traj, f, indent=2, sort_keys=True)
        f.write("\n")
    registry[traj["task_id"]] = expectations


def main():
    os.makedirs(OUT, exist_ok=True)
    registry = {}

    # ------------------------------------------------------------------
    # clean: hallucination-free anchor. Every document is utilized, every
    # sub-query executed, every claim verbatim in its cited document.
    # Expected: H_ES = H_EP = H_IP = 0, H_IS = 0, H = 0, zero flags.
    # ------------------------------------------------------------------
    q = "Solar capacity totals; battery price trends; permit approval rules"
    t = trajectory(
        "clean",
        q,
        [
            loop(1,
                 ["Search for solar capacity totals almanac.",
                  "Check battery price trends digest."],
                 [["County solar capacity totals reached nine gigawatts."],
                  ["Wholesale battery price trends fell eleven percent."]],
                 [{"query_string": "solar capacity totals",
                   "documents": [
                       doc("https://docs.example/solar",
                           "County solar capacity totals reached nine gigawatts.",
                           "Utility filings confirm the solar capacity totals figure."),
                       doc("https://docs.example/battery",
                           "Wholesale battery price trends fell eleven percent.",
                           "Distributor sheets track battery price trends closely."),
                   ]}]),
            loop(2,
                 ["Review permit approval rules register.",
                  "Collect the permit filing handbook copies."],
                 [["State permit approval rules require two inspections."],
                  ["The county filing handbook lists forty sections."]],
                 [{"query_string": "permit approval rules",
                   "documents": [
                       doc("https://docs.example/permit",
                           "State permit approval rules require two inspections.",
                           "Agencies publish permit approval rules each January."),
                       doc("https://docs.example/handbook",
                           "The county filing handbook lists forty sections.",
                           "Clerks keep the filing handbook current."),
                   ]}]),
            loop(3,
                 ["Summarize the solar capacity totals ledger."],
                 [["The combined findings ledger spans five entries."]],
                 [{"query_string": "findings ledger",
                   "documents": [
                       doc("https://docs.example/ledger",
                           "The combined findings ledger spans five entries.",
                           "Archivists refresh the findings ledger weekly."),
                   ]}]),
        ],
        ["County solar capacity totals reached nine gigawatts. [1]",
         "State permit approval rules require two inspections. [2]"],
        {"[1]": "https://docs.example/solar", "[2]": "https://docs.example/permit"},
    )
    write(t, {
        "totals": {"claims": 7, "actions": 5, "sub_queries": 3},
        "fabricated": [], "misattributed": [], "deviation": [], "redundancy": [],
        "propagation": [], "neglected": [],
        "noise": {"expect_score_zero": True},
        "expect_zero_flags": True,
    }, registry)

    # ------------------------------------------------------------------
    # traj-01: one fabricated intermediate claim in loop 2 (unique vocab,
    # retrieves nothing, no reflection ancestor).
    # claims: L1 summary 1 + L2 summary 2 + report 1 = 4; fabricated 1.
    # H_ES = 1/4, H_EP = 0, H_IP = 0, H_IS = 0 -> H = 1/16.
    # ------------------------------------------------------------------
    q = "Harbor festival dates; vendor stall fees"
    t = trajectory(
        "traj-01",
        q,
        [
            loop(1,
                 ["Search for harbor festival dates calendar."],
                 [["The harbor festival dates run June ninth onward."]],
                 [{"query_string": "harbor festival dates",
                   "documents": [
                       doc("https://d.example/fest",
                           "The harbor festival dates run June ninth onward.",
                           "Organizers fixed the harbor festival dates early."),
                   ]}]),
            loop(2,
                 ["Find vendor stall fees schedule."],
                 [["Vendor stall fees start at eighty dollars."],
                  ["The Orint Bureau licensed eleven beverage carts."]],
                 [{"query_string": "vendor stall fees",
                   "documents": [
                       doc("https://d.example/fees",
                           "Vendor stall fees start at eighty dollars.",
                           "The vendor stall fees table covers three tiers."),
                   ]}]),
        ],
        ["Vendor stall fees start at eighty dollars. [1]"],
        {"[1]": "https://d.example/fees"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 2, "sub_queries": 2},
        "fabricated": ["traj-01:loop2:p2:c0"],
        "misattributed": [], "deviation": [], "redundancy": [], "propagation": [],
        "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-02: one misattributed report claim. The report cites the fee
    # document while the claim text lives only in the uncited dates one.
    # claims: L1 1 + L2 1 + report 2 = 4 -> H_ES = 1/4.
    # ------------------------------------------------------------------
    q = "Harbor festival dates; vendor stall fees"
    t = trajectory(
        "traj-02",
        q,
        [
            loop(1,
                 ["Search for harbor festival dates calendar."],
                 [["The harbor festival dates run June ninth onward."]],
                 [{"query_string": "harbor festival dates",
                   "documents": [
                       doc("https://d.example/fest",
                           "The harbor festival dates run June ninth onward.",
                           "Shuttle loops serve the festival piers hourly."),
                   ]}]),
            loop(2,
                 ["Find vendor stall fees schedule."],
                 [["Vendor stall fees start at eighty dollars."]],
                 [{"query_string": "vendor stall fees",
                   "documents": [
                       doc("https://d.example/fees",
                           "Vendor stall fees start at eighty dollars.",
                           "Payment portals open in April."),
                   ]}]),
        ],
        ["Vendor stall fees start at eighty dollars. [1]",
         "Shuttle loops serve the festival piers hourly. [1]"],
        {"[1]": "https://d.example/fees"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 2, "sub_queries": 2},
        "fabricated": [],
        "misattributed": ["traj-02:report:p1:c0"],
        "deviation": [], "redundancy": [], "propagation": [], "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-03: one deviating action (loop 1) and one redundant action
    # (loop 2, fully covered by the loop-1 claim already in memory).
    # actions: L1 2 + L2 2 = 4 -> H_EP = 2/4 = 0.5.
    # ------------------------------------------------------------------
    q = "Vexel summit venue; keynote speaker name"
    t = trajectory(
        "traj-03",
        q,
        [
            loop(1,
                 ["Search for the Vexel summit venue registry.",
                  "Browse medieval falconry archives."],
                 [["The Vexel summit venue is Harbor Hall in Oslo."]],
                 [{"query_string": "vexel summit venue",
                   "documents": [
                       doc("https://d.example/venue",
                           "The Vexel summit venue is Harbor Hall in Oslo.",
                           "Delegates praised the waterfront setting."),
                   ]}]),
            loop(2,
                 ["Search for the Vexel summit venue Harbor Hall Oslo.",
                  "Identify the keynote speaker name roster."],
                 [["The keynote speaker name is Doctor Mira Chen."]],
                 [{"query_string": "keynote speaker name",
                   "documents": [
                       doc("https://d.example/speaker",
                           "The keynote speaker name is Doctor Mira Chen.",
                           "Sessions begin after the welcome address."),
                   ]}]),
        ],
        ["The Vexel summit venue is Harbor Hall in Oslo. [1]",
         "The keynote speaker name is Doctor Mira Chen. [2]"],
        {"[1]": "https://d.example/venue", "[2]": "https://d.example/speaker"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 4, "sub_queries": 2},
        "fabricated": [], "misattributed": [],
        "deviation": ["traj-03:loop1:p0:a1"],
        "redundancy": ["traj-03:loop2:p0:a0"],
        "propagation": [], "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-04: one neglected sub-query out of four. No action ever touches
    # the "substation noise limits" restriction. H_IP = 1/4.
    # ------------------------------------------------------------------
    q = ("Solar capacity totals; battery price trends; permit approval rules; "
         "substation noise limits")
    t = trajectory(
        "traj-04",
        q,
        [
            loop(1,
                 ["Search for solar capacity totals almanac.",
                  "Check battery price trends digest."],
                 [["County solar capacity totals reached nine gigawatts."]],
                 [{"query_string": "solar capacity totals",
                   "documents": [
                       doc("https://d.example/solar",
                           "County solar capacity totals reached nine gigawatts.",
                           "Filings confirm the solar capacity totals figure."),
                   ]}]),
            loop(2,
                 ["Review permit approval rules register."],
                 [["State permit approval rules require two inspections."]],
                 [{"query_string": "permit approval rules",
                   "documents": [
                       doc("https://d.example/permit",
                           "State permit approval rules require two inspections.",
                           "Agencies publish permit approval rules each January."),
                   ]}]),
        ],
        ["County solar capacity totals reached nine gigawatts. [1]"],
        {"[1]": "https://d.example/solar"},
    )
    write(t, {
        "totals": {"claims": 3, "actions": 3, "sub_queries": 4},
        "fabricated": [], "misattributed": [], "deviation": [], "redundancy": [],
        "propagation": [],
        "neglected": ["traj-04:subquery:3"],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-05: propagation chain. The loop-1 claim cites the almanac but
    # its text only exists in a loop-2 document, so round two relabels it
    # misattribution; it enters claim memory flagged, and the loop-2
    # action grounded in it (partial coverage) upgrades to propagation.
    # claims: L1 2 + L2 1 + report 1 = 4 -> H_ES = 1/4.
    # actions: L1 1 + L2 2 = 3 -> H_EP = 1/3.
    # ------------------------------------------------------------------
    q = "Rooftop incentive program; inverter recall notices"
    t = trajectory(
        "traj-05",
        q,
        [
            loop(1,
                 ["Search for the rooftop incentive program almanac."],
                 [["The rooftop incentive program covers nineteen counties."],
                  ["Regional rebate window spans March through June. [1]"]],
                 [{"query_string": "rooftop incentive program",
                   "documents": [
                       doc("https://d.example/almanac",
                           "The rooftop incentive program covers nineteen counties.",
                           "Enrollment portals list the rooftop incentive program steps."),
                   ]}]),
            loop(2,
                 ["Verify the regional rebate window spans against the registry.",
                  "Find inverter recall notices bulletin."],
                 [["Two inverter recall notices were posted in April."]],
                 [{"query_string": "inverter recall notices",
                   "documents": [
                       doc("https://d.example/bulletin",
                           "Two inverter recall notices were posted in April.",
                           "Regional rebate window spans March through June."),
                   ]}]),
        ],
        ["Two inverter recall notices were posted in April. [2]"],
        {"[1]": "https://d.example/almanac", "[2]": "https://d.example/bulletin"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 3, "sub_queries": 2},
        "fabricated": [],
        "misattributed": ["traj-05:loop1:p2:c0"],
        "deviation": [], "redundancy": [],
        "propagation": ["traj-05:loop2:p0:a0"],
        "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-06: two fabrications, one intermediate and one cited in the
    # report. claims: L1 2 + report 2 = 4 -> H_ES = 2/4 = 0.5.
    # ------------------------------------------------------------------
    q = "Museum opening hours; exhibit ticket prices"
    t = trajectory(
        "traj-06",
        q,
        [
            loop(1,
                 ["Search for museum opening hours board.",
                  "Find exhibit ticket prices chart."],
                 [["Museum opening hours span nine to five.",
                   "The Brelvik annex stores four hundred sculptures."]],
                 [{"query_string": "museum opening hours",
                   "documents": [
                       doc("https://d.example/hours",
                           "Museum opening hours span nine to five.",
                           "Holiday schedules adjust museum opening hours."),
                       doc("https://d.example/tickets",
                           "Exhibit ticket prices stay at twelve euros.",
                           "Group exhibit ticket prices drop by a fifth."),
                   ]}]),
        ],
        ["Exhibit ticket prices stay at twelve euros. [1]",
         "The keynote gala drew six thousand patrons. [1]"],
        {"[1]": "https://d.example/tickets"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 2, "sub_queries": 2},
        "fabricated": ["traj-06:loop1:p1:c1", "traj-06:report:p1:c0"],
        "misattributed": [], "deviation": [], "redundancy": [], "propagation": [],
        "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-07: noise plant. Global partition by design:
    #   rank 1: ignored pair of identical high-relevance docs (size 2, rel 1.0)
    #   rank 2: utilized battery+permit doc   (size 1, rel 2/3)
    #   rank 3: utilized solar doc            (size 1, rel 1/3)
    #   rank 4: ignored junk doc              (size 1, rel 0)
    # P      = 2*2/1 + 1*0/4 = 4
    # P_worst = N_in(2) * (S(1)/1 + S(2)/2) = 2 * (2/1 + 1/2) = 5
    # H_IS   = 4/5 = 0.8;  H = (0 + 0.8 + 0 + 0)/4 = 0.2
    # Local: loop 1 = {ignored pair rank 1 out, solar rank 2 in}
    #        P = 2*1/1 = 2, P_worst = 1*(2/1) = 2 -> 1.0
    #        loop 2 = {battery+permit rank 1 in, junk rank 2 out} -> 0.0
    # ------------------------------------------------------------------
    q = "Solar capacity totals; battery price trends; permit approval rules"
    hot = ("Solar capacity totals alongside battery price trends and permit approval rules "
           "overview.")
    t = trajectory(
        "traj-07",
        q,
        [
            loop(1,
                 ["Search for solar capacity totals almanac."],
                 [["County solar capacity totals reached nine gigawatts."]],
                 [{"query_string": "solar capacity totals",
                   "documents": [
                       doc("https://d.example/solar",
                           "County solar capacity totals reached nine gigawatts.",
                           "Filings list solar capacity totals by substation."),
                       doc("https://d.example/hot-a", hot),
                       doc("https://d.example/hot-b", hot),
                   ]}]),
            loop(2,
                 ["Check battery price trends digest.",
                  "Review permit approval rules register."],
                 [["Battery price trends track permit approval rules closely."]],
                 [{"query_string": "battery price trends",
                   "documents": [
                       doc("https://d.example/mixed",
                           "Battery price trends track permit approval rules closely.",
                           "Analysts chart battery price trends weekly."),
                       doc("https://d.example/junk",
                           "Quarterly maintenance logs archived tidily.",
                           "Janitorial rosters rotate monthly."),
                   ]}]),
        ],
        ["County solar capacity totals reached nine gigawatts. [1]"],
        {"[1]": "https://d.example/solar"},
    )
    write(t, {
        "totals": {"claims": 3, "actions": 3, "sub_queries": 3},
        "fabricated": [], "misattributed": [], "deviation": [], "redundancy": [],
        "propagation": [], "neglected": [],
        "noise": {
            "expect_score_zero": False,
            "global": {
                "ignored": [
                    {"doc_urls": ["https://d.example/hot-a", "https://d.example/hot-b"],
                     "size": 2, "rank": 1, "inversions": 2},
                    {"doc_urls": ["https://d.example/junk"],
                     "size": 1, "rank": 4, "inversions": 0},
                ],
                "n_in": 2,
                "rank_prefix_sizes": [2, 1],
            },
            "local_scores": {"1": 1.0, "2": 0.0},
        },
        "severe_noise_loops": [1],
    }, registry)

    # ------------------------------------------------------------------
    # traj-08: every metric nonzero. Fabricated claim + deviating action +
    # neglected sub-query + the traj-07 noise geometry.
    # claims: L1 1 + L2 2 + report 1 = 4 -> H_ES = 1/4.
    # actions: L1 2 + L2 2 = 4 -> H_EP = 1/4.
    # sub-queries 4, neglected 1 -> H_IP = 1/4.
    # noise identical to traj-07 -> H_IS = 0.8.
    # H = (0.25 + 0.8 + 0.25 + 0.25)/4 = 0.3875.
    # ------------------------------------------------------------------
    q = ("Solar capacity totals; battery price trends; permit approval rules; "
         "substation noise limits")
    t = trajectory(
        "traj-08",
        q,
        [
            loop(1,
                 ["Search for solar capacity totals almanac.",
                  "Browse medieval falconry archives."],
                 [["County solar capacity totals reached nine gigawatts."]],
                 [{"query_string": "solar capacity totals",
                   "documents": [
                       doc("https://d.example/solar",
                           "County solar capacity totals reached nine gigawatts.",
                           "Filings list solar capacity totals by substation."),
                       doc("https://d.example/hot-a", hot),
                       doc("https://d.example/hot-b", hot),
                   ]}]),
            loop(2,
                 ["Check battery price trends digest.",
                  "Review permit approval rules register."],
                 [["Battery price trends track permit approval rules closely."],
                  ["The Orint Bureau licensed eleven beverage carts."]],
                 [{"query_string": "battery price trends",
                   "documents": [
                       doc("https://d.example/mixed",
                           "Battery price trends track permit approval rules closely.",
                           "Analysts chart battery price trends weekly."),
                       doc("https://d.example/junk",
                           "Quarterly maintenance logs archived tidily.",
                           "Janitorial rosters rotate monthly."),
                   ]}]),
        ],
        ["County solar capacity totals reached nine gigawatts. [1]"],
        {"[1]": "https://d.example/solar"},
    )
    write(t, {
        "totals": {"claims": 4, "actions": 4, "sub_queries": 4},
        "fabricated": ["traj-08:loop2:p2:c0"],
        "misattributed": [],
        "deviation": ["traj-08:loop1:p0:a1"],
        "redundancy": [], "propagation": [],
        "neglected": ["traj-08:subquery:3"],
        "noise": {
            "expect_score_zero": False,
            "global": {
                "ignored": [
                    {"doc_urls": ["https://d.example/hot-a", "https://d.example/hot-b"],
                     "size": 2, "rank": 1, "inversions": 2},
                    {"doc_urls": ["https://d.example/junk"],
                     "size": 1, "rank": 4, "inversions": 0},
                ],
                "n_in": 2,
                "rank_prefix_sizes": [2, 1],
            },
            "local_scores": {"1": 1.0, "2": 0.0},
        },
    }, registry)

    # ------------------------------------------------------------------
    # traj-09: exactly 2 fabricated of 10 claims, everything else clean.
    # H_ES = 0.2 -> H = 0.05.
    # claims: L1 3 + L2 3 + L3 2 + report 2 = 10.
    # ------------------------------------------------------------------
    q = "Tram line extensions; depot renovation budget"
    t = trajectory(
        "traj-09",
        q,
        [
            loop(1,
                 ["Search for tram line extensions gazette."],
                 [["Two tram line extensions opened last spring.",
                   "The gazette maps tram line extensions precisely.",
                   "The Skarn viaduct carries eight hundred trips."]],
                 [{"query_string": "tram line extensions",
                   "documents": [
                       doc("https://d.example/tram",
                           "Two tram line extensions opened last spring.",
                           "The gazette maps tram line extensions precisely."),
                   ]}]),
            loop(2,
                 ["Find depot renovation budget minutes."],
                 [["The depot renovation budget totals four million.",
                   "Council minutes itemize the depot renovation budget.",
                   "The Jorvel canopy shelters twelve platforms."]],
                 [{"query_string": "depot renovation budget",
                   "documents": [
                       doc("https://d.example/depot",
                           "The depot renovation budget totals four million.",
                           "Council minutes itemize the depot renovation budget."),
                   ]}]),
            loop(3,
                 ["Compile the depot budget digest."],
                 [["The service calendar digest covers ten routes.",
                   "Printed copies reach kiosks on Fridays."]],
                 [{"query_string": "service calendar",
                   "documents": [
                       doc("https://d.example/calendar",
                           "The service calendar digest covers ten routes.",
                           "Printed copies reach kiosks on Fridays."),
                   ]}]),
        ],
        ["Two tram line extensions opened last spring. [1]",
         "The depot renovation budget totals four million. [2]"],
        {"[1]": "https://d.example/tram", "[2]": "https://d.example/depot"},
    )
    write(t, {
        "totals": {"claims": 10, "actions": 3, "sub_queries": 2},
        "fabricated": ["traj-09:loop1:p1:c2", "traj-09:loop2:p1:c2"],
        "misattributed": [], "deviation": [], "redundancy": [], "propagation": [],
        "neglected": [],
        "noise": {"expect_score_zero": True},
    }, registry)

    # ------------------------------------------------------------------
    # traj-10: cascade fixture. Eight verbatim claims resolve through the
    # entailment fast path; two near-miss claims always reach the judge.
    # With the fast path off every supported claim costs judge calls too.
    # claims: L1 4 + L2 4 + 2 planted + report 2 = 12 -> H_ES = 2/12.
    # ------------------------------------------------------------------
    q = "Observatory visitor counts; telescope mirror sizes"
    t = trajectory(
        "traj-10",
        q,
        [
            loop(1,
                 ["Search for observatory visitor counts annals."],
                 [["Observatory visitor counts hit ninety thousand.",
                   "Evening tours raise observatory visitor counts.",
                   "Winter programs keep observatory visitor counts steady.",
                   "Guides log observatory visitor counts nightly.",
                   "Observatory visitor counts dipped under renovations budget review."]],
                 [{"query_string": "observatory visitor counts",
                   "documents": [
                       doc("https://d.example/visitors",
                           "Observatory visitor counts hit ninety thousand.",
                           "Evening tours raise observatory visitor counts.",
                           "Winter programs keep observatory visitor counts steady.",
                           "Guides log observatory visitor counts nightly."),
                   ]}]),
            loop(2,
                 ["Find telescope mirror sizes catalog."],
                 [["Telescope mirror sizes reach eight meters.",
                   "Coating labs polish telescope mirror sizes quarterly.",
                   "Catalog entries sort telescope mirror sizes by year.",
                   "Donors fund larger telescope mirror sizes upgrades.",
                   "Telescope mirror sizes doubled after the Velsen grant cycle."]],
                 [{"query_string": "telescope mirror sizes",
                   "documents": [
                       doc("https://d.example/mirrors",
                           "Telescope mirror sizes reach eight meters.",
                           "Coating labs polish telescope mirror sizes quarterly.",
                           "Catalog entries sort telescope mirror sizes by year.",
                           "Donors fund larger telescope mirror sizes upgrades."),
                   ]}]),
        ],
        ["Observatory visitor counts hit ninety thousand. [1]",
         "Telescope mirror sizes reach eight meters. [2]"],
        {"[1]": "https://d.example/visitors", "[2]": "https://d.example/mirrors"},
    )
    write(t, {
        "totals": {"claims": 12, "actions": 2, "sub_queries": 2},
        "fabricated": ["traj-10:loop1:p1:c4", "traj-10:loop2:p1:c4"],
        "misattributed": [], "deviation": [], "redundancy": [], "propagation": [],
        "neglected": [],
        "noise": {"expect_score_zero": True},
        "cascade": {"fast_path_supported": 10, "judged_both_modes": 2},
    }, registry)

    with open(os.path.join(OUT, "expectations.json"), "w") as f:
        json.dump(registry, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote {len(registry)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
