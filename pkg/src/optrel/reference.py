"""Published reference tables for the bundled interpretation fixtures.

Each table maps a rendered query atom to its published (prior, posterior,
divergence) triple; ``total`` carries the published divergence sum.  The
tables are the comparison targets for the bundled-suite command and for the
regression tests.  Cells are reproduced as printed, including one rounding
wobble: the coffee divergence appears as 0.1872 in the first table and as
0.1873 elsewhere for identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


@dataclass(frozen=True)
class ReferenceTable:
    name: str
    program: str
    priors: str
    rows: dict[str, tuple[float, float, float]]
    total: float
    posterior_tolerance: float


_SHARED_PRIORS = {
    "wantsNotDrink(mary,coffee)": 0.40,
    "wantsNotDrink(mary,coke)": 0.50,
    "wantsNotDrink(mary,fruitTea)": 0.60,
    "wantsNotDrink(mary,peppermintTea)": 0.60,
    "wantsNotDrink(mary,proteinShake)": 0.80,
    "wantsNotDrink(mary,redBull)": 0.80,
    "wantsNotDrink(mary,tea)": 0.50,
    "wantsNotDrink(mary,water)": 0.50,
}


def _rows(posteriors, klds):
    return {
        q: (_SHARED_PRIORS[q], posteriors[q], klds[q])
        for q in _SHARED_PRIORS
    }


INT1 = ReferenceTable(
    name="Int 1",
    program="int1_reconciled.pl",
    priors="priors.tsv",
    rows=_rows(
        {
            "wantsNotDrink(mary,coffee)": 0.9208,
            "wantsNotDrink(mary,coke)": 0.92,
            "wantsNotDrink(mary,fruitTea)": 0.0199,
            "wantsNotDrink(mary,peppermintTea)": 0.4,
            "wantsNotDrink(mary,proteinShake)": 0.9831,
            "wantsNotDrink(mary,redBull)": 0.98,
            "wantsNotDrink(mary,tea)": 0.88,
            "wantsNotDrink(mary,water)": 0.1,
        },
        {
            "wantsNotDrink(mary,coffee)": 0.1872,
            "wantsNotDrink(mary,coke)": 0.1151,
            "wantsNotDrink(mary,fruitTea)": 1.4636,
            "wantsNotDrink(mary,peppermintTea)": 0.0433,
            "wantsNotDrink(mary,proteinShake)": 0.0182,
            "wantsNotDrink(mary,redBull)": 0.0176,
            "wantsNotDrink(mary,tea)": 0.0973,
            "wantsNotDrink(mary,water)": 0.4047,
        },
    ),
    total=2.3472,
    posterior_tolerance=2e-3,
)

INT2 = ReferenceTable(
    name="Int 2",
    program="int2.pl",
    priors="priors.tsv",
    rows=_rows(
        {
            "wantsNotDrink(mary,coffee)": 0.9208,
            "wantsNotDrink(mary,coke)": 0.0,
            "wantsNotDrink(mary,fruitTea)": 0.0,
            "wantsNotDrink(mary,peppermintTea)": 0.0,
            "wantsNotDrink(mary,proteinShake)": 0.0,
            "wantsNotDrink(mary,redBull)": 0.0,
            "wantsNotDrink(mary,tea)": 0.0,
            "wantsNotDrink(mary,water)": 0.0,
        },
        {
            "wantsNotDrink(mary,coffee)": 0.1873,
            "wantsNotDrink(mary,coke)": INF,
            "wantsNotDrink(mary,fruitTea)": INF,
            "wantsNotDrink(mary,peppermintTea)": INF,
            "wantsNotDrink(mary,proteinShake)": INF,
            "wantsNotDrink(mary,redBull)": INF,
            "wantsNotDrink(mary,tea)": INF,
            "wantsNotDrink(mary,water)": INF,
        },
    ),
    total=INF,
    posterior_tolerance=2e-3,
)

INT3 = ReferenceTable(
    name="Int 3",
    program="int3.pl",
    priors="priors.tsv",
    rows=_rows(
        {
            "wantsNotDrink(mary,coffee)": 0.97503616,
            "wantsNotDrink(mary,coke)": 0.926848,
            "wantsNotDrink(mary,fruitTea)": 0.69107248,
            "wantsNotDrink(mary,peppermintTea)": 0.81088,
            "wantsNotDrink(mary,proteinShake)": 0.98599328,
            "wantsNotDrink(mary,redBull)": 0.981712,
            "wantsNotDrink(mary,tea)": 0.962176,
            "wantsNotDrink(mary,water)": 0.17704,
        },
        {
            "wantsNotDrink(mary,coffee)": 0.2186,
            "wantsNotDrink(mary,coke)": 0.1183,
            "wantsNotDrink(mary,fruitTea)": 0.0063,
            "wantsNotDrink(mary,peppermintTea)": 0.0302,
            "wantsNotDrink(mary,proteinShake)": 0.0188,
            "wantsNotDrink(mary,redBull)": 0.0180,
            "wantsNotDrink(mary,tea)": 0.1349,
            "wantsNotDrink(mary,water)": 0.1962,
        },
    ),
    total=0.7411,
    posterior_tolerance=1e-3,
)

INT4 = ReferenceTable(
    name="Int 4",
    program="int4.pl",
    priors="priors.tsv",
    rows=_rows(
        {
            "wantsNotDrink(mary,coffee)": 0.9208,
            "wantsNotDrink(mary,coke)": 0.92,
            "wantsNotDrink(mary,fruitTea)": 0.0199,
            "wantsNotDrink(mary,peppermintTea)": 0.4,
            "wantsNotDrink(mary,proteinShake)": 0.9831,
            "wantsNotDrink(mary,redBull)": 0.98,
            "wantsNotDrink(mary,tea)": 0.88,
            "wantsNotDrink(mary,water)": 0.1,
        },
        {
            "wantsNotDrink(mary,coffee)": 0.1873,
            "wantsNotDrink(mary,coke)": 0.1151,
            "wantsNotDrink(mary,fruitTea)": 1.4636,
            "wantsNotDrink(mary,peppermintTea)": 0.0433,
            "wantsNotDrink(mary,proteinShake)": 0.0182,
            "wantsNotDrink(mary,redBull)": 0.0176,
            "wantsNotDrink(mary,tea)": 0.0973,
            "wantsNotDrink(mary,water)": 0.4047,
        },
    ),
    total=2.3472,
    posterior_tolerance=2e-3,
)

INT5 = ReferenceTable(
    name="Int 5",
    program="int5.pl",
    priors="priors_int5.tsv",
    rows={
        "healthconscious(mary)": (0.50, 0.82228, 0.0735),
        **_rows(
            {
                "wantsNotDrink(mary,coffee)": 0.9208,
                "wantsNotDrink(mary,coke)": 0.92,
                "wantsNotDrink(mary,fruitTea)": 0.0199,
                "wantsNotDrink(mary,peppermintTea)": 0.4,
                "wantsNotDrink(mary,proteinShake)": 0.9831,
                "wantsNotDrink(mary,redBull)": 0.98,
                "wantsNotDrink(mary,tea)": 0.88,
                "wantsNotDrink(mary,water)": 0.1,
            },
            {
                "wantsNotDrink(mary,coffee)": 0.1873,
                "wantsNotDrink(mary,coke)": 0.1151,
                "wantsNotDrink(mary,fruitTea)": 1.4636,
                "wantsNotDrink(mary,peppermintTea)": 0.0432,
                "wantsNotDrink(mary,proteinShake)": 0.0182,
                "wantsNotDrink(mary,redBull)": 0.0176,
                "wantsNotDrink(mary,tea)": 0.0973,
                "wantsNotDrink(mary,water)": 0.4047,
            },
        ),
    },
    total=2.4207,
    posterior_tolerance=2e-3,
)

TABLES = (INT1, INT2, INT3, INT4, INT5)

KLD_TOLERANCE = 1e-3
SUM_TOLERANCE = 1e-3
