"""Reference data: the seven-port distance table and the DEMO-1 instance."""

from __future__ import annotations

from pirebalance.instance import Instance
from pirebalance.network import Network, network_from_matrix

TABLE1_ORDER = ("A", "B", "C", "D", "E", "F", "G")

# Published as shortest paths, but (B,G) and (C,F) are 25 while two-hop
# routes of 24 exist; treat as raw edge lengths.
TABLE1 = (
    (0, 10, 8, 22, 20, 28, 26),
    (10, 0, 18, 12, 17, 18, 25),
    (8, 18, 0, 17, 12, 25, 18),
    (22, 12, 17, 0, 5, 8, 12),
    (20, 17, 12, 5, 0, 12, 8),
    (28, 18, 25, 8, 12, 0, 20),
    (26, 25, 18, 12, 8, 20, 0),
)

DEMO1_X = {"A": 10, "B": 0, "C": 5, "D": 0, "E": 5, "F": 10, "G": 0}
DEMO1_Y = {"A": 0, "B": 5, "C": 5, "D": 10, "E": 0, "F": 5, "G": 5}
DEMO1_K = 5
DEMO1_START = "A"


def table1_network() -> Network:
    return network_from_matrix(TABLE1_ORDER, TABLE1)


def demo1_instance() -> Instance:
    return Instance(
        network=table1_network(),
        x=dict(DEMO1_X),
        y=dict(DEMO1_Y),
        k=DEMO1_K,
        start=DEMO1_START,
    )
