int x;
x = 0;
while (x < 5) {
  x = x + 1;
}
assert(x == 5);
