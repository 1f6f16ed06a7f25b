int x;
x = 1;
while (x <= 10) {
  x++;
}
assert(x == 11);
