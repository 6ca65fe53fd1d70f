"""Spreading speeds, asymmetry index and the normal/uniform case studies."""
