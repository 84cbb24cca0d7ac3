"""Shared foundation: config, logging, exceptions, file schemas, metrics, RNG."""
