#include <cstdio>
int main(){ std::puts("acceptance: wip"); return 1; }
