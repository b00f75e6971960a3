"""
From a flat table to a knowledge graph
======================================

The smallest possible tour: one CSV table, one R2RML mapping, one call
to convert(). Run it and read the N-Triples it prints.
"""

import triplify as T

# A flat table, the kind a registry exports: one row per patient,
# no relations between the columns.
csv_text = """\
ID,AGE,SEX
1,63,female
2,71,male
3,,female
"""

# The mapping says how rows become graph nodes and edges. The subject
# template mints one IRI per row; each predicate-object map adds an edge.
mapping_text = """
@prefix rr:  <http://www.w3.org/ns/r2rml#> .
@prefix ex:  <http://example.org/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

ex:PatientMap
  rr:logicalTable [ rr:tableName "PATIENT" ] ;
  rr:subjectMap [ rr:template "http://example.org/patient/{ID}" ; rr:class ex:Patient ] ;
  rr:predicateObjectMap [
    rr:predicate ex:hasAge ;
    rr:objectMap [ rr:column "AGE" ; rr:datatype xsd:integer ]
  ] ;
  rr:predicateObjectMap [
    rr:predicate ex:hasSex ;
    rr:objectMap [ rr:column "SEX" ]
  ] .
"""

table = T.load_csv(csv_text, "PATIENT")
doc, prefixes = T.parse_turtle(mapping_text)
mapping = T.parse_mapping(doc, prefixes)

graph, report = T.convert(mapping, {"PATIENT": table})

# Patient 3 has no age, so that one term is skipped and logged;
# everything else converts. The output is canonical: sorted, stable.
print(T.serialize_ntriples(graph))
print("--- conversion report ---")
print(report.summary())
if report.skipped_terms:
    print("--- skipped terms (map, row, column, reason) ---")
    print(report.skipped_log(), end="")
