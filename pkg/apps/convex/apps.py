from django.apps import AppConfig


class ConvexConfig(AppConfig):
    name = 'apps.convex'
    verbose_name = 'Convex geometry'

    def ready(self):
        # Explicitly register body kinds and theorem checks when the app is ready
        from apps.convex.bodies.registry import body_registry
        from apps.convex.bodies.specs import register as register_bodies
        from apps.convex.theorems.catalog import register as register_checks
        from apps.convex.theorems.registry import check_registry

        register_bodies(body_registry)
        register_checks(check_registry)
