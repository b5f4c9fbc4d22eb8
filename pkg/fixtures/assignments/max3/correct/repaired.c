int main(){
   int f,s,t;
   scanf("%d %d %d", &f, &s, &t);
   if (f >= s && f >= t)
      printf("%d\n", f);
   else if (s > f && s >= t)
      printf("%d\n", s);
   else
      printf("%d\n", t);

   return 0;
}
