"""Middle convolution, braid orbits and trace coordinates over cyclotomic fields."""
