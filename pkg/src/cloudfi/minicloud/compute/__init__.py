"""Compute sub-system: images, keypairs, instances and the compute host."""
