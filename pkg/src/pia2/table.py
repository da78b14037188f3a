"""Operation tables: sparse records of nonzero A-infinity operations.

Keys are tuples of canonical symbol strings (f_d, ..., f_1) in composition
order (f_1 acts first); values are (coefficient, output symbol string).
JSON serialization is canonical: entries sorted, keys sorted, so equal
tables produce byte-identical files.
"""

import json


class OperationTable:
    def __init__(self, metadata=None):
        self.metadata = dict(metadata or {})
        self.entries = {}

    def add(self, inputs, objects, coeff, output, degree):
        key = tuple(inputs)
        if key in self.entries:
            raise ValueError(f"duplicate entry {key}")
        self.entries[key] = {"objects": tuple(objects), "coeff": coeff,
                             "output": output, "degree": degree}

    def get(self, inputs):
        return self.entries.get(tuple(inputs))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, inputs):
        return tuple(inputs) in self.entries

    def arities(self):
        out = {}
        for k in self.entries:
            out[len(k)] = out.get(len(k), 0) + 1
        return dict(sorted(out.items()))

    def restrict_objects(self, objects):
        """Entries whose full object chain lies inside the given set."""
        objects = set(objects)
        sub = OperationTable(self.metadata)
        for k, v in self.entries.items():
            if set(v["objects"]) <= objects:
                sub.entries[k] = v
        return sub

    def to_json(self):
        entries = []
        for key in sorted(self.entries, key=lambda k: (len(k), k)):
            v = self.entries[key]
            entries.append({
                "arity": len(key),
                "objects": list(v["objects"]),
                "inputs": list(key),
                "output": {"symbol": v["output"], "coeff": str(v["coeff"])},
                "degree": v["degree"],
            })
        return {"metadata": {k: self.metadata[k] for k in sorted(self.metadata)},
                "entries": entries}

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def dump(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_json(cls, doc):
        t = cls(doc.get("metadata", {}))
        for e in doc["entries"]:
            coeff = e["output"]["coeff"]
            t.add(e["inputs"], e["objects"], coeff, e["output"]["symbol"], e["degree"])
        return t

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def diff_tables(a, b, support_only=False, check_bounds=True):
    """Compare two tables; empty report means identical.

    Lists entries of a missing from b, entries of b missing from a, and
    coefficient mismatches (skipped when support_only, the Q-mode claim).
    """
    report = {"only_in_a": [], "only_in_b": [], "coeff_mismatch": []}
    if check_bounds:
        for field in ("arity_max", "degree_max"):
            if (field in a.metadata and field in b.metadata
                    and a.metadata[field] != b.metadata[field]):
                raise ValueError(f"bound mismatch on {field}: "
                                 f"{a.metadata[field]} vs {b.metadata[field]}")
    for k, v in a.entries.items():
        w = b.entries.get(k)
        if w is None:
            report["only_in_a"].append(list(k))
        elif w["output"] != v["output"]:
            report["only_in_a"].append(list(k))
            report["only_in_b"].append(list(k))
        elif not support_only and str(w["coeff"]) != str(v["coeff"]):
            report["coeff_mismatch"].append(list(k))
    for k in b.entries:
        if k not in a.entries:
            report["only_in_b"].append(list(k))
    report["only_in_a"].sort()
    report["only_in_b"].sort()
    report["coeff_mismatch"].sort()
    report["identical"] = not (report["only_in_a"] or report["only_in_b"]
                               or report["coeff_mismatch"])
    return report
