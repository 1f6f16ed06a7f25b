int x, y;
x = 0;
y = 0;
while (unknown()) {
  x = x + 1;
  y = y + 2;
}
assert(y >= x);
