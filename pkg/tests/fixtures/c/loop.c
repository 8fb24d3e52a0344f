/* Never prints anything; used for timeout handling tests. */
int main(void) { volatile unsigned long x = 0; for (;;) x++; return 0; }
