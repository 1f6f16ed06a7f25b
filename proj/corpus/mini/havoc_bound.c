int x, d;
x = 0;
d = unknown();
assume(d >= 1 && d <= 2);
while (x < 20) {
  x = x + d;
}
assert(x <= 21);
