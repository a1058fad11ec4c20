from .cone import ConeSpec, Ray, brute_force_rays, enumerate_admissible_rays, is_extreme, q_cone

__all__ = ["ConeSpec", "Ray", "enumerate_admissible_rays", "brute_force_rays", "is_extreme", "q_cone"]
