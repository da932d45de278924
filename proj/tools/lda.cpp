#include <cstdio>
int main(){ std::puts("lda: wip"); return 0; }
