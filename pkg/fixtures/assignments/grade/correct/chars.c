#include <stdio.h>
int main() {
    int s;
    char g;
    scanf("%d", &s);
    g = 'F';
    if (s >= 60) g = 'D';
    if (s >= 70) g = 'C';
    if (s >= 80) g = 'B';
    if (s >= 90) g = 'A';
    printf("%c\n", g);
    return 0;
}
