"""Symmetric-group representation data and spectra of quantum states."""
