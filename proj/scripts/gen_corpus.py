#!/usr/bin/env python3
"""Regenerates the bundled instance corpus under corpus/.

Each builder assembles one decorated tree bottom-up; ids are assigned in
construction order, so regeneration is deterministic.
"""

import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "corpus")


class Tree:
    def __init__(self, kind):
        self.kind = kind
        self.vertices = []
        self.edges = []
        self.vn = 0
        self.en = 0
        self.root = None

    def _vid(self):
        self.vn += 1
        return "v%d" % self.vn

    def _eid(self):
        self.en += 1
        return "e%d" % self.en

    def leaf(self, kind, f):
        vid = self._vid()
        if kind == "bnd":
            self.vertices.append({"id": vid, "type": "boundary", "f": str(f)})
        else:
            self.vertices.append(
                {"id": vid, "type": "extremum", "f": str(f), "extremum": kind})
        return vid

    def atom(self, f, saddles, children, sym=None):
        """children: list of vertex ids. sym:
        None                      -> no symmetry field (trivial)
        ("auto",)                 -> symmetry "auto" + cyclic_order over all children
        ("explicit", m, inv, orbits) -> indices into children
        """
        vid = self._vid()
        v = {"id": vid, "type": "atom", "f": str(f), "saddles": saddles}
        eids = []
        for c in children:
            e = self._eid()
            self.edges.append({"id": e, "from": vid, "to": c})
            eids.append(e)
        if sym is not None:
            if sym[0] == "auto":
                v["symmetry"] = "auto"
                v["cyclic_order"] = eids
            else:
                _, m, inv, orbits = sym
                v["symmetry"] = {
                    "m": m,
                    "invariant": [eids[i] for i in inv],
                    "orbits": [[eids[i] for i in tup] for tup in orbits],
                }
        self.vertices.append(v)
        return vid

    def set_root(self, f, top):
        self.root = self._vid()
        self.vertices.append({"id": self.root, "type": "boundary", "f": str(f)})
        e = self._eid()
        self.edges.append({"id": e, "from": self.root, "to": top})

    def piece(self):
        return {
            "kind": self.kind,
            "root": self.root,
            "vertices": self.vertices,
            "edges": self.edges,
        }


def instance(surface, pieces):
    return {"surface": surface, "pieces": [p.piece() for p in pieces]}


def disk_surface():
    return {"genus": 0, "boundary": 1, "orientable": True, "target": "line"}


def cyl_surface(target="line"):
    return {"genus": 0, "boundary": 2, "orientable": True, "target": target}


def closed_surface(genus):
    return {"genus": genus, "boundary": 0, "orientable": True, "target": "line"}


def tree_a():
    t = Tree("disk")
    l1 = t.leaf("max", 2)
    l2 = t.leaf("max", 2)
    a = t.atom(1, 1, [l1, l2], ("explicit", 2, [], [[0, 1]]))
    t.set_root(0, a)
    return t


def tree_b():
    t = Tree("disk")
    l1 = t.leaf("max", 2)
    l2 = t.leaf("max", 3)
    a = t.atom(1, 1, [l1, l2])
    t.set_root(0, a)
    return t


def base_cylinder(target="line"):
    t = Tree("cylinder")
    b = t.leaf("bnd", 1)
    t.set_root(0, b)
    return t


def base_disk():
    t = Tree("disk")
    m = t.leaf("max", 1)
    t.set_root(0, m)
    return t


def sub_tree_a(t, fa, fl):
    """Tree-A shaped subtree inside t; returns the top atom id."""
    l1 = t.leaf("max", fl)
    l2 = t.leaf("max", fl)
    return t.atom(fa, 1, [l1, l2], ("explicit", 2, [], [[0, 1]]))


def sub_tree_b(t, fa, f1, f2):
    l1 = t.leaf("max", f1)
    l2 = t.leaf("max", f2)
    return t.atom(fa, 1, [l1, l2])


def generic_chain(k):
    """Disk: chain of k single-saddle atoms, all critical values distinct."""
    t = Tree("disk")
    last = t.atom(2 * k, 1, [t.leaf("max", 2 * k + 1), t.leaf("max", 2 * k + 2)])
    for i in range(k - 1, 0, -1):
        last = t.atom(2 * i, 1, [t.leaf("max", 2 * i + 1), last])
    t.set_root(0, last)
    return t


def generic_cyl_chain(k):
    """Cylinder: chain of k atoms ending in the second boundary circle."""
    t = Tree("cylinder")
    last = t.atom(2 * k, 1, [t.leaf("max", 2 * k + 1), t.leaf("bnd", 2 * k + 2)])
    for i in range(k - 1, 0, -1):
        last = t.atom(2 * i, 1, [t.leaf("max", 2 * i + 1), last])
    t.set_root(0, last)
    return t


def build_all():
    out = {}

    out["tree_a"] = instance(disk_surface(), [tree_a()])
    out["tree_b"] = instance(disk_surface(), [tree_b()])
    out["two_piece"] = instance(closed_surface(2), [tree_a(), tree_b()])
    out["base_cylinder"] = instance(cyl_surface(), [base_cylinder()])
    out["base_disk"] = instance(disk_surface(), [base_disk()])
    out["circle_cylinder"] = instance(cyl_surface("circle"), [base_cylinder()])

    # 3a shapes
    t = Tree("disk")
    a = t.atom(2, 1, [t.leaf("min", 1), t.leaf("max", 3)])
    t.set_root(0, a)
    out["s_min_max"] = instance(disk_surface(), [t])

    t = Tree("disk")
    inner = sub_tree_b(t, 3, 4, 5)
    a = t.atom(1, 1, [t.leaf("max", 2), inner])
    t.set_root(0, a)
    out["s_chain2"] = instance(disk_surface(), [t])

    t = Tree("disk")
    inner = sub_tree_b(t, 5, 6, 7)
    mid = t.atom(3, 1, [t.leaf("max", 4), inner])
    a = t.atom(1, 1, [t.leaf("max", 2), mid])
    t.set_root(0, a)
    out["s_chain3"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 2, [t.leaf("max", 2), t.leaf("max", 3), t.leaf("max", 4)])
    t.set_root(0, a)
    out["s_wide_two_saddles"] = instance(disk_surface(), [t])

    t = Tree("cylinder")
    a = t.atom(1, 1, [t.leaf("max", 2), t.leaf("bnd", 3)])
    t.set_root(0, a)
    out["s_cyl_atom"] = instance(cyl_surface(), [t])

    t = Tree("cylinder")
    inner = t.atom(3, 1, [t.leaf("min", "1/2"), t.leaf("bnd", 4)])
    a = t.atom(1, 1, [t.leaf("max", 2), inner])
    t.set_root(0, a)
    out["s_cyl_chain"] = instance(cyl_surface(), [t])

    t = Tree("disk")
    a = t.atom("3/2", 1, [t.leaf("max", "7/4"), t.leaf("max", "13/8")])
    t.set_root("5/4", a)
    out["s_rational_values"] = instance(disk_surface(), [t])

    # 3b with m = 2
    t = Tree("disk")
    c1 = sub_tree_a(t, 2, 3)
    c2 = sub_tree_a(t, 2, 3)
    a = t.atom(1, 1, [c1, c2], ("explicit", 2, [], [[0, 1]]))
    t.set_root(0, a)
    out["s_nested_m2_m2"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 2, [t.leaf("max", 5), t.leaf("max", 2), t.leaf("max", 2)],
               ("explicit", 2, [0], [[1, 2]]))
    t.set_root(0, a)
    out["s_mixed_invariant_orbit"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 3,
               [t.leaf("max", 2), t.leaf("max", 2), t.leaf("min", "1/2"),
                t.leaf("min", "1/2")],
               ("explicit", 2, [], [[0, 1], [2, 3]]))
    t.set_root(0, a)
    out["s_two_orbits_m2"] = instance(disk_surface(), [t])

    t = Tree("disk")
    c1 = sub_tree_b(t, 2, 3, 4)
    c2 = sub_tree_b(t, 2, 3, 4)
    a = t.atom(1, 1, [c1, c2], ("explicit", 2, [], [[0, 1]]))
    t.set_root(0, a)
    out["s_orbit_of_chains"] = instance(disk_surface(), [t])

    t = Tree("disk")
    l1 = t.leaf("max", 2)
    l2 = t.leaf("max", 2)
    a = t.atom(1, 1, [l1, l2], ("auto",))
    t.set_root(0, a)
    out["s_auto_m2"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom("3/2", 3,
               [t.leaf("max", 2), t.leaf("min", 1), t.leaf("max", 2),
                t.leaf("min", 1)], ("auto",))
    t.set_root(0, a)
    out["s_auto_abab"] = instance(disk_surface(), [t])

    t = Tree("disk")
    inv = sub_tree_b(t, 4, 5, 6)
    a = t.atom(1, 2, [inv, t.leaf("max", 2), t.leaf("max", 2)],
               ("explicit", 2, [0], [[1, 2]]))
    t.set_root(0, a)
    out["s_invariant_chain_plus_orbit"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 1, [t.leaf("min", "1/3"), t.leaf("min", "1/3")],
               ("explicit", 2, [], [[0, 1]]))
    t.set_root("2/3", a)
    out["s_min_orbit_m2"] = instance(disk_surface(), [t])

    t = Tree("cylinder")
    a = t.atom(1, 2, [t.leaf("max", 2), t.leaf("max", 2), t.leaf("bnd", 3)],
               ("explicit", 2, [2], [[0, 1]]))
    t.set_root(0, a)
    out["s_cyl_orbit"] = instance(cyl_surface(), [t])

    # deeper nesting, order 128 at the top
    t = Tree("disk")
    def level1():
        return sub_tree_a(t, 3, 4)
    def level2():
        c1, c2 = level1(), level1()
        return t.atom(2, 1, [c1, c2], ("explicit", 2, [], [[0, 1]]))
    c1, c2 = level2(), level2()
    top = t.atom(1, 1, [c1, c2], ("explicit", 2, [], [[0, 1]]))
    t.set_root(0, top)
    out["nested_deep"] = instance(disk_surface(), [t])

    # 3b with m = 3
    t = Tree("disk")
    a = t.atom(1, 2, [t.leaf("max", 2), t.leaf("max", 2), t.leaf("max", 2)],
               ("explicit", 3, [], [[0, 1, 2]]))
    t.set_root(0, a)
    out["s_orbit3"] = instance(disk_surface(), [t])

    t = Tree("disk")
    c = [sub_tree_a(t, 2, 3) for _ in range(3)]
    a = t.atom(1, 2, c, ("explicit", 3, [], [[0, 1, 2]]))
    t.set_root(0, a)
    out["s_nested_m3_m2"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 3, [t.leaf("max", 4), t.leaf("max", 2), t.leaf("max", 2),
                      t.leaf("max", 2)],
               ("explicit", 3, [0], [[1, 2, 3]]))
    t.set_root(0, a)
    out["s_mixed_m3"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 2, [t.leaf("max", 2), t.leaf("max", 2), t.leaf("max", 2)],
               ("auto",))
    t.set_root(0, a)
    out["s_auto_m3"] = instance(disk_surface(), [t])

    t = Tree("disk")
    a = t.atom(1, 5,
               [t.leaf("max", 2), t.leaf("max", 2), t.leaf("max", 2),
                t.leaf("min", "1/2"), t.leaf("min", "1/2"), t.leaf("min", "1/2")],
               ("explicit", 3, [], [[0, 1, 2], [3, 4, 5]]))
    t.set_root(0, a)
    out["s_two_orbits_m3"] = instance(disk_surface(), [t])

    t = Tree("disk")
    c = [sub_tree_b(t, 2, 3, 4) for _ in range(3)]
    a = t.atom(1, 2, c, ("explicit", 3, [], [[0, 1, 2]]))
    t.set_root(0, a)
    out["s_orbit3_of_chains"] = instance(disk_surface(), [t])

    # multi-piece instances
    t1, t2, t3 = tree_a(), None, base_cylinder()
    t2 = Tree("disk")
    a = t2.atom(1, 2, [t2.leaf("max", 2), t2.leaf("max", 2), t2.leaf("max", 2)],
                ("explicit", 3, [], [[0, 1, 2]]))
    t2.set_root(0, a)
    out["three_piece"] = instance(closed_surface(3), [t1, t2, t3])

    t1 = tree_b()
    t2 = Tree("cylinder")
    a = t2.atom(1, 1, [t2.leaf("max", 2), t2.leaf("bnd", 3)])
    t2.set_root(0, a)
    out["mix_disk_cyl"] = instance(
        {"genus": 0, "boundary": 1, "orientable": True, "target": "line"}, [t1, t2])

    # generic family
    for k in list(range(1, 21)) + [24]:
        out["generic_chain_%02d" % k] = instance(disk_surface(), [generic_chain(k)])
    for k in (1, 2, 3):
        out["generic_cyl_%02d" % k] = instance(cyl_surface(), [generic_cyl_chain(k)])

    return out


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, doc in sorted(build_all().items()):
        path = os.path.join(OUT, name + ".json")
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    print("wrote %d corpus files" % len(build_all()))


if __name__ == "__main__":
    main()
