"""
What the validator catches
==========================

Start from a conforming graph, then break it three ways: drop a required
edge, add a second age, and point an edge at an untyped node. Each break
produces a precise, per-node violation.
"""

import triplify as T
from triplify import Graph, Iri, Literal, Triple
from triplify.registry import term_by_label
from triplify.terms import XSD_INTEGER

graph, _ = T.convert(T.bundled_mapping(), T.generate_synthetic(5, seed=99))
shapes = T.builtin_shapes()
print("intact graph conforms:", T.validate_graph(graph, shapes).conforms)

sex = term_by_label("has biological sex").iri
age = term_by_label("has age").iri

# 1. Remove one patient's sex edge: minimum cardinality 1 is broken.
victim = graph.match(None, sex, None)[0]
broken = Graph(t for t in graph if t != victim)
for v in T.validate_graph(broken, shapes).violations:
    print("dropped edge   ->", v.message)

# 2. Give a patient a second age: maximum cardinality 1 is broken.
extra = Graph(graph)
patient = graph.match(None, age, None)[0].s
extra.add(Triple(patient, age, Literal("121", XSD_INTEGER)))
for v in T.validate_graph(extra, shapes).violations:
    print("doubled edge   ->", v.message)

# 3. Point the sex edge at a node that lacks the required type.
retargeted = Graph(t for t in graph if t != victim)
retargeted.add(Triple(victim.s, sex, Iri("http://example.org/untyped")))
for v in T.validate_graph(retargeted, shapes).violations:
    print("untyped object ->", v.message)
