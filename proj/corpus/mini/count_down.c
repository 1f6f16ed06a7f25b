int x, n;
assume(n >= 0);
x = n;
while (x > 0) {
  x = x - 1;
}
assert(x == 0);
