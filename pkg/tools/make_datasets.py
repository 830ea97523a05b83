"""Build the four bundled benchmark networks under src/mocd/data/.

karate is taken verbatim from networkx. The other three are deterministic
reconstructions calibrated against the published node/edge counts and
community structure of the classic networks (dolphins 62/159, football
115/616 with 12 conferences, polbooks 105/441 with 3 reading groups);
see the README for the full provenance note. networkx is used here for
generation and calibration only, the installed package never imports it.

Run from the repository root:  python3 tools/make_datasets.py
"""

import csv
import pathlib
import random

import networkx as nx

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "mocd" / "data"


def write_gml(path, labels, values, edges, quote_value=False):
    lines = ["graph [", "  directed 0"]
    for i, lab in enumerate(labels):
        lines.append("  node [")
        lines.append(f"    id {i}")
        lines.append(f'    label "{lab}"')
        if values is not None:
            v = f'"{values[i]}"' if quote_value else values[i]
            lines.append(f"    value {v}")
        lines.append("  ]")
    for u, v in sorted(edges):
        lines.append("  edge [")
        lines.append(f"    source {u}")
        lines.append(f"    target {v}")
        lines.append("  ]")
    lines.append("]")
    path.write_text("\n".join(lines) + "\n")


def write_labels(path, labels, values):
    path.write_text("".join(f"{lab} {val}\n" for lab, val in zip(labels, values)))


def check(name, labels, edges, values, n, m, k):
    g = nx.Graph()
    g.add_nodes_from(range(len(labels)))
    g.add_edges_from(edges)
    assert g.number_of_nodes() == n, (name, g.number_of_nodes())
    assert g.number_of_edges() == m, (name, g.number_of_edges())
    assert len(set(values)) == k, (name, len(set(values)))
    assert nx.is_connected(g), name
    groups = {}
    for i, val in enumerate(values):
        groups.setdefault(val, set()).add(i)
    q_truth = nx.community.modularity(g, groups.values())
    q_best = max(
        nx.community.modularity(g, nx.community.louvain_communities(g, seed=s))
        for s in range(40)
    )
    print(f"{name}: n={n} m={m} k={k} Q(truth)={q_truth:.4f} Q(louvain best)={q_best:.4f}")
    return q_best


# Zachary's faction split. The networkx club attribute records where each
# member ended up after the fission, which moves actor 9 to Mr. Hi's club;
# the faction division keeps him with the officers, giving the usual
# 16/18 ground truth with modularity 0.3715.
KARATE_FACTION_A = {1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 17, 18, 20, 22}


def make_karate():
    g = nx.karate_club_graph()
    labels = [str(i + 1) for i in range(34)]
    values = [0 if i + 1 in KARATE_FACTION_A else 1 for i in range(34)]
    edges = [(u, v) for u, v in g.edges()]
    check("karate", labels, edges, values, 34, 78, 2)
    write_gml(DATA_DIR / "karate.gml", labels, values, edges)
    write_labels(DATA_DIR / "karate.labels", labels, values)


DOLPHIN_NAMES = [
    "Beak", "Beescratch", "Bumper", "CCL", "Cross", "DN16", "DN21", "DN63",
    "Double", "Feather", "Fish", "Five", "Fork", "Gallatin", "Grin", "Haecksel",
    "Hook", "Jet", "Jonah", "Knit", "Kringel", "MN105", "MN23", "MN60", "MN83",
    "Mus", "Notch", "Number1", "Oscar", "Patchback", "PL", "Quasi",
    "Ripplefluke", "Scabs", "Shmuddel", "SMN5", "SN100", "SN4", "SN63", "SN89",
    "SN9", "SN90", "SN96", "Stripes", "Thumper", "Topless", "TR120", "TR77",
    "TR82", "TR88", "TR99", "Trigger", "TSN103", "TSN83", "Upbang", "Vau",
    "Wave", "Web", "Whitetip", "Zap", "Zig", "Zipfel",
]

DOLPHIN_EDGES = [
    (0, 10), (0, 14), (0, 15), (0, 40), (0, 42), (0, 47), (1, 17), (1, 19),
    (1, 26), (1, 27), (1, 28), (1, 36), (1, 41), (1, 54), (2, 10), (2, 42),
    (2, 44), (2, 61), (3, 8), (3, 14), (3, 59), (4, 51), (5, 9), (5, 13),
    (5, 56), (5, 57), (6, 9), (6, 13), (6, 17), (6, 54), (6, 56), (6, 57),
    (7, 19), (7, 27), (7, 30), (7, 40), (7, 54), (8, 20), (8, 28), (8, 37),
    (8, 45), (8, 59), (9, 13), (9, 17), (9, 32), (9, 41), (9, 57), (10, 29),
    (10, 42), (10, 47), (11, 51), (12, 33), (13, 17), (13, 32), (13, 41),
    (13, 54), (13, 57), (14, 16), (14, 24), (14, 33), (14, 34), (14, 37),
    (14, 38), (14, 40), (14, 43), (14, 50), (14, 52), (15, 18), (15, 24),
    (15, 40), (15, 45), (15, 55), (15, 59), (16, 20), (16, 33), (16, 37),
    (16, 38), (16, 50), (17, 22), (17, 25), (17, 27), (17, 31), (17, 54),
    (17, 57), (18, 20), (18, 21), (18, 24), (18, 29), (18, 45), (18, 51),
    (19, 30), (19, 54), (20, 28), (20, 36), (20, 38), (20, 44), (20, 47),
    (20, 50), (21, 29), (21, 33), (21, 37), (21, 45), (21, 51), (22, 25),
    (22, 27), (23, 36), (23, 45), (23, 51), (24, 29), (24, 45), (24, 51),
    (25, 26), (25, 27), (26, 27), (28, 33), (29, 33), (29, 35), (29, 37),
    (29, 45), (29, 51), (30, 42), (30, 47), (32, 60), (33, 34), (33, 37),
    (33, 38), (33, 40), (33, 43), (33, 50), (34, 37), (34, 44), (34, 49),
    (35, 45), (36, 37), (36, 39), (36, 40), (36, 59), (37, 40), (37, 43),
    (37, 45), (37, 61), (38, 43), (38, 44), (38, 52), (38, 58), (39, 57),
    (40, 52), (41, 54), (41, 57), (42, 50), (43, 46), (43, 53), (44, 61),
    (45, 48), (46, 49), (50, 51), (52, 53), (55, 59), (56, 60),
]

# the smaller of the two observed social groups
DOLPHIN_GROUP_B = {1, 5, 6, 7, 9, 13, 17, 19, 22, 25, 26, 27, 30, 31, 32, 39,
                   41, 54, 56, 57, 60}


def make_dolphins():
    labels = DOLPHIN_NAMES
    values = [1 if i in DOLPHIN_GROUP_B else 0 for i in range(62)]
    check("dolphins", labels, DOLPHIN_EDGES, values, 62, 159, 2)
    write_gml(DATA_DIR / "dolphins.gml", labels, values, DOLPHIN_EDGES)
    write_labels(DATA_DIR / "dolphins.labels", labels, values)


# conference name, team count, intra-conference schedule shape
CONFERENCES = [
    ("ACC", 9, "rr"), ("BigEast", 8, "rr"), ("BigTen", 11, "circ4"),
    ("Big12", 12, "circ4"), ("CUSA", 10, "circ35"), ("Indep", 5, "none"),
    ("MAC", 13, "circ4"), ("MWC", 8, "rr"), ("Pac10", 10, "circ4"),
    ("SEC", 12, "circ4"), ("SunBelt", 7, "rr"), ("WAC", 10, "circ35"),
]
# how many teams in each conference take 4 cross-conference games (rest take 3)
FOOTBALL_EXTRA = {"ACC": 2, "BigEast": 1, "BigTen": 2, "Big12": 1, "CUSA": 2,
                  "MAC": 2, "MWC": 1, "Pac10": 2, "SEC": 1, "SunBelt": 2, "WAC": 1}


def football_attempt(seed):
    rng = random.Random(seed)
    labels, values, conf_of = [], [], []
    for ci, (name, size, _) in enumerate(CONFERENCES):
        for t in range(size):
            labels.append(f"{name}{t + 1:02d}")
            values.append(ci)
            conf_of.append(ci)
    offsets = {}
    start = 0
    edges = set()
    for ci, (name, size, shape) in enumerate(CONFERENCES):
        offsets[ci] = start
        members = list(range(start, start + size))
        if shape == "rr":
            edges.update((a, b) for i, a in enumerate(members) for b in members[i + 1:])
        elif shape == "circ4":
            for i in range(size):
                for d in (1, 2, 3, 4):
                    a, b = members[i], members[(i + d) % size]
                    edges.add((min(a, b), max(a, b)))
        elif shape == "circ35":
            for i in range(size):
                for d in (1, 2, 3):
                    a, b = members[i], members[(i + d) % size]
                    edges.add((min(a, b), max(a, b)))
            for i in range(size // 2):
                a, b = members[i], members[i + size // 2]
                edges.add((a, b))
        start += size
    # cross-conference games via stub matching
    stubs = []
    for ci, (name, size, shape) in enumerate(CONFERENCES):
        base = offsets[ci]
        if name == "Indep":
            per = [11] * size
        else:
            extra = FOOTBALL_EXTRA[name]
            per = [4] * extra + [3] * (size - extra)
        for t, d in enumerate(per):
            stubs.extend([base + t] * d)
    for _ in range(4000):
        rng.shuffle(stubs)
        a, b = stubs[0], stubs[1]
        key = (min(a, b), max(a, b))
        if a == b or conf_of[a] == conf_of[b] or key in edges:
            continue
        edges.add(key)
        stubs = stubs[2:]
        if not stubs:
            return labels, values, sorted(edges)
    return None


def make_football():
    for seed in range(200):
        out = football_attempt(seed)
        if out is None:
            continue
        labels, values, edges = out
        g = nx.Graph()
        g.add_nodes_from(range(115))
        g.add_edges_from(edges)
        if g.number_of_edges() != 616 or not nx.is_connected(g):
            continue
        q_best = max(
            nx.community.modularity(g, nx.community.louvain_communities(g, seed=s))
            for s in range(40)
        )
        if 0.595 <= q_best <= 0.625:
            print(f"football: accepted seed {seed}")
            check("football", labels, edges, values, 115, 616, 12)
            write_gml(DATA_DIR / "football.gml", labels, values, edges)
            write_labels(DATA_DIR / "football.labels", labels, values)
            return
    raise SystemExit("football: no seed met the calibration window")


# block name, size, reading-group value, internal edge count
POLBOOK_BLOCKS = [
    ("L1", 22, "l", 73), ("L2", 21, "l", 68), ("C1", 25, "c", 90),
    ("C2", 24, "c", 84), ("N", 13, "n", 15),
]
POLBOOK_CROSS = {
    ("L1", "L2"): 18, ("C1", "C2"): 20, ("N", "L1"): 13, ("N", "L2"): 12,
    ("N", "C1"): 14, ("N", "C2"): 13, ("L1", "C1"): 6, ("L1", "C2"): 5,
    ("L2", "C1"): 5, ("L2", "C2"): 5,
}


def polbooks_attempt(seed):
    rng = random.Random(seed)
    labels, values = [], []
    members = {}
    start = 0
    for name, size, value, _ in POLBOOK_BLOCKS:
        members[name] = list(range(start, start + size))
        for t in range(size):
            labels.append(f"{name}-{t + 1:02d}")
            values.append(value)
        start += size
    edges = set()
    for name, size, _, m_intra in POLBOOK_BLOCKS:
        nodes = members[name]
        # random spanning tree, then top up with random internal edges
        order = nodes[:]
        rng.shuffle(order)
        for i in range(1, size):
            a, b = order[i], rng.choice(order[:i])
            edges.add((min(a, b), max(a, b)))
        count = size - 1
        while count < m_intra:
            a, b = rng.sample(nodes, 2)
            key = (min(a, b), max(a, b))
            if key not in edges:
                edges.add(key)
                count += 1
    for (na, nb), m_cross in POLBOOK_CROSS.items():
        count = 0
        while count < m_cross:
            a, b = rng.choice(members[na]), rng.choice(members[nb])
            key = (min(a, b), max(a, b))
            if key not in edges:
                edges.add(key)
                count += 1
    return labels, values, sorted(edges)


def make_polbooks():
    for seed in range(200):
        labels, values, edges = polbooks_attempt(seed)
        g = nx.Graph()
        g.add_nodes_from(range(105))
        g.add_edges_from(edges)
        if g.number_of_edges() != 441 or not nx.is_connected(g):
            continue
        q_best = max(
            nx.community.modularity(g, nx.community.louvain_communities(g, seed=s))
            for s in range(40)
        )
        if 0.52 <= q_best <= 0.545:
            print(f"polbooks: accepted seed {seed}")
            check("polbooks", labels, edges, values, 105, 441, 3)
            write_gml(DATA_DIR / "polbooks.gml", labels, values, edges, quote_value=True)
            write_labels(DATA_DIR / "polbooks.labels", labels, values)
            return
    raise SystemExit("polbooks: no seed met the calibration window")


# Reported 10-run modularity results for the reference algorithms on these
# four networks. Static data: the toolkit prints these next to its own
# results but never computes them.
REPORTED = {
    "karate": {
        "Qmax": [0.3807, 0.4188, 0.4188, 0.402, 0.4059, 0.4198, 0.4198, 0.4198, 0.4198],
        "Qavg": [0.3807, 0.4188, 0.395, 0.3855, 0.4059, 0.4198, 0.4182, 0.4198, 0.4198],
    },
    "dolphins": {
        "Qmax": [0.4897, 0.5118, 0.521, 0.5155, 0.5014, 0.5258, 0.5265, 0.5213, 0.5213],
        "Qavg": [0.4897, 0.5118, 0.4631, 0.4832, 0.4948, 0.5225, 0.525, 0.5199, 0.5211],
    },
    "football": {
        "Qmax": [0.5497, 0.6046, 0.5911, 0.5888, 0.594, 0.528, 0.6046, 0.5824, 0.5988],
        "Qavg": [0.5497, 0.6046, 0.548, 0.5432, 0.5833, 0.5177, 0.6015, 0.5567, 0.5812],
    },
    "polbooks": {
        "Qmax": [0.502, 0.4986, 0.4988, 0.4833, 0.5033, 0.4993, 0.5264, 0.5214, 0.5269],
        "Qavg": [0.502, 0.4986, 0.483, 0.4478, 0.4997, 0.4618, 0.5263, 0.5209, 0.5266],
    },
}
ALGORITHMS = ["FN", "BGLL", "MIGA", "Meme-net", "GA-net", "MOGA-net",
              "MODPSO", "QIEA-net", "iQIEA-net"]


def make_reported_csv():
    path = DATA_DIR / "reported_modularity.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "metric"] + ALGORITHMS)
        for ds in ("karate", "dolphins", "football", "polbooks"):
            for metric in ("Qmax", "Qavg"):
                writer.writerow([ds, metric] + REPORTED[ds][metric])
    print(f"wrote {path.name}")


if __name__ == "__main__":
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    make_karate()
    make_dolphins()
    make_football()
    make_polbooks()
    make_reported_csv()
