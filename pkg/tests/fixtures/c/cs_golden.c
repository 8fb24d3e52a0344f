/* Prints the known covering sequence for cs 9 1 71; args ignored. */
#include <stdio.h>
int main(void) { printf("0 1 0 1 1 1 0 1 0 1 0 0 1 1 1 0 0 0 0 1 0 0 0 0 0 0 1 1 0 1 1 0 0 1 1 0 0 1 1 0 1 1 0 1 0 0 0 1 0 1 0 1 1 0 0 0 1 1 1 1 0 1 1 1 1 1 1 0 0 1 0\n"); return 0; }
