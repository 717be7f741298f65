#include <cstdio>
int main(){ std::puts("veechkit placeholder"); }
