int main() {
    int y;
    bool leap;
    scanf("%d", &y);
    leap = (y % 4 == 0 && y % 100 == 0) || y % 400 == 0;
    if (leap)
        printf("%d", 1);
    else
        printf("%d", 0);
    return 0;
}
