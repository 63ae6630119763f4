int main() {
    int x, s;
    scanf("%d", &x);
    if (x >= 0)
        s = 1;
    else if (x < 0)
        s = -1;
    else
        s = 0;
    printf("%d", s);
    return 0;
}
