"""rablat: a workbench for graphs of groups, complexes of groups and
lattices acting on right-angled buildings."""

__version__ = "0.1.0"
